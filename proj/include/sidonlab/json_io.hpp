#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sidonlab/bourgain.hpp"
#include "sidonlab/fourier.hpp"
#include "sidonlab/norms.hpp"
#include "sidonlab/relations.hpp"
#include "sidonlab/riesz.hpp"

namespace sidonlab {

using Json = nlohmann::ordered_json;

/// Integers are JSON numbers when they fit in 64 bits, decimal strings otherwise.
Json int_to_json(Int v);
Int int_from_json(const Json& j);

Json character_to_json(const Character& c);
Character character_from_json(const Json& j);

/// {"family": tag, "elements": [...]} with bare payloads per element.
Json set_to_json(std::span<const Character> set);
std::vector<Character> set_from_json(const Json& j);

Json relation_to_json(const EpsilonRelation& r);
Json word_to_json(const SignedWord& w);

/// [{"character": ..., "re": ..., "im": ...}, ...]
Json expansion_to_json(const FourierExpansion& f);
/// Accepts the list form (non-empty) or {"family": tag, "terms": [...]}.
FourierExpansion expansion_from_json(const Json& j);

PhaseMap phases_from_json(const Json& j, std::span<const Character> set);
Json phases_to_json(const PhaseMap& z);

WeightedSet weighted_set_from_json(const Json& j);
Json weighted_set_to_json(const WeightedSet& w);

Json certificate_to_json(const NormCertificate& c);
Json qi_extraction_to_json(const QiExtraction& e);
Json trace_to_json(const PipelineTrace& t);
Json cb_certificate_to_json(const CbCertificate& c);

/// Inline JSON text (starting with '{' or '[') or a path to a file.
Json load_json_argument(const std::string& arg);
/// Same, but a file or text holding several JSON-lines documents yields one entry each.
std::vector<Json> load_json_documents(const std::string& arg);

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace sidonlab
