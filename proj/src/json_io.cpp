#include "sidonlab/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sidonlab/errors.hpp"

namespace sidonlab {

Json int_to_json(Int v) {
  if (fits_int64(v)) return static_cast<std::int64_t>(v);
  return to_string(v);
}

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? static_cast<Int>(j.get<std::uint64_t>())
                                                           : static_cast<Int>(j.get<std::int64_t>());
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (d != static_cast<double>(static_cast<std::int64_t>(d))) throw DomainError("expected an integer, got " + j.dump());
    return static_cast<Int>(static_cast<std::int64_t>(d));
  }
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw DomainError("expected an integer, got " + j.dump());
}

namespace {

Json payload_to_json(const Character& c) {
  switch (c.family()) {
    case Family::Integer: return int_to_json(c.value());
    case Family::FreeAbelian: {
      Json obj = Json::object();
      for (const auto& [j, n] : c.coords()) obj[std::to_string(j)] = int_to_json(n);
      return obj;
    }
    case Family::Boolean: {
      Json arr = Json::array();
      for (Coordinate j : c.indices()) arr.push_back(j);
      return arr;
    }
  }
  return nullptr;
}

Coordinate parse_coordinate(const std::string& text) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || v > 0xffffffffUL) throw DomainError("bad coordinate index '" + text + "'");
  return static_cast<Coordinate>(v);
}

Character payload_from_json(Family family, const Json& p) {
  switch (family) {
    case Family::Integer: return Character::integer(int_from_json(p));
    case Family::FreeAbelian: {
      if (!p.is_object()) throw DomainError("ZoplusN payload must be an object of coordinate: exponent");
      std::vector<std::pair<Coordinate, Int>> coords;
      for (const auto& [k, v] : p.items()) coords.emplace_back(parse_coordinate(k), int_from_json(v));
      return Character::free_abelian(std::move(coords));
    }
    case Family::Boolean: {
      if (!p.is_array()) throw DomainError("Walsh payload must be an array of indices");
      std::vector<Coordinate> idx;
      for (const auto& v : p) {
        const Int x = int_from_json(v);
        if (x < 0 || x > 0xffffffffLL) throw DomainError("bad Walsh index");
        idx.push_back(static_cast<Coordinate>(x));
      }
      std::sort(idx.begin(), idx.end());
      if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) throw DomainError("duplicate Walsh index");
      return Character::walsh(std::move(idx));
    }
  }
  throw DomainError("bad family");
}

const char* payload_key(Family family) {
  switch (family) {
    case Family::Integer: return "n";
    case Family::FreeAbelian: return "coords";
    case Family::Boolean: return "indices";
  }
  return "n";
}

Family family_of(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw DomainError("object lacks a \"family\" tag: " + j.dump());
  return parse_family_tag(j["family"].get<std::string>());
}

}  // namespace

Json character_to_json(const Character& c) {
  Json j;
  j["family"] = std::string(family_tag(c.family()));
  j[payload_key(c.family())] = payload_to_json(c);
  return j;
}

Character character_from_json(const Json& j) {
  const Family f = family_of(j);
  const char* key = payload_key(f);
  if (!j.contains(key)) throw DomainError(std::string("character lacks \"") + key + "\"");
  return payload_from_json(f, j[key]);
}

Json set_to_json(std::span<const Character> set) {
  Json j;
  j["family"] = std::string(family_tag(set.empty() ? Family::Integer : set.front().family()));
  Json arr = Json::array();
  for (const auto& c : set) arr.push_back(payload_to_json(c));
  j["elements"] = std::move(arr);
  return j;
}

std::vector<Character> set_from_json(const Json& j) {
  const Family f = family_of(j);
  if (!j.contains("elements") || !j["elements"].is_array()) throw DomainError("set lacks an \"elements\" array");
  std::vector<Character> out;
  for (const auto& e : j["elements"]) out.push_back(payload_from_json(f, e));
  return out;
}

Json relation_to_json(const EpsilonRelation& r) {
  Json eps = Json::object();
  for (std::size_t i = 0; i < r.base().size(); ++i)
    if (r.eps()[i] != 0) eps[r.base()[i].key()] = r.eps()[i];
  Json j;
  j["eps"] = std::move(eps);
  j["height"] = r.height();
  return j;
}

Json word_to_json(const SignedWord& w) {
  Json n = Json::object();
  for (const auto& t : w.terms) n[t.character.key()] = int_to_json(t.exponent);
  Json j;
  j["n"] = std::move(n);
  j["height"] = int_to_json(w.height());
  return j;
}

Json expansion_to_json(const FourierExpansion& f) {
  Json arr = Json::array();
  for (const auto& [gamma, c] : f.terms()) {
    Json t;
    t["character"] = character_to_json(gamma);
    t["re"] = c.real();
    t["im"] = c.imag();
    arr.push_back(std::move(t));
  }
  return arr;
}

FourierExpansion expansion_from_json(const Json& j) {
  const Json* terms = &j;
  std::optional<Family> family;
  if (j.is_object()) {
    family = family_of(j);
    if (!j.contains("terms") || !j["terms"].is_array()) throw DomainError("expansion lacks a \"terms\" array");
    terms = &j["terms"];
  } else if (!j.is_array()) {
    throw DomainError("expansion must be an array of terms or an object with \"terms\"");
  }
  if (!family) {
    if (terms->empty()) throw DomainError("empty expansion list needs the {\"family\",\"terms\"} form");
    family = character_from_json((*terms)[0].at("character")).family();
  }
  FourierExpansion f(*family);
  for (const auto& t : *terms) {
    if (!t.is_object() || !t.contains("character")) throw DomainError("expansion term lacks \"character\"");
    const double re = t.value("re", 0.0);
    const double im = t.value("im", 0.0);
    f.add(character_from_json(t["character"]), Complex{re, im});
  }
  f.normalise(0.0);
  return f;
}

PhaseMap phases_from_json(const Json& j, std::span<const Character> set) {
  PhaseMap z;
  auto parse_phase = [](const Json& v) -> Complex {
    if (v.is_number()) return std::polar(1.0, v.get<double>());  // angle in radians
    if (v.is_array() && v.size() == 2) return Complex{v[0].get<double>(), v[1].get<double>()};
    if (v.is_object()) return Complex{v.value("re", 0.0), v.value("im", 0.0)};
    throw DomainError("phase must be an angle, [re, im] or {\"re\",\"im\"}");
  };
  if (j.is_array()) {
    if (j.size() != set.size()) throw DomainError("phase list length differs from the set size");
    for (std::size_t i = 0; i < set.size(); ++i) z[set[i]] = parse_phase(j[i]);
  } else if (j.is_object()) {
    for (const auto& c : set) {
      const std::string key = c.key();
      if (j.contains(key)) z[c] = parse_phase(j[key]);
    }
  } else {
    throw DomainError("phases must be a list aligned with the set or an object keyed by character");
  }
  return z;
}

Json phases_to_json(const PhaseMap& z) {
  Json j = Json::object();
  for (const auto& [c, v] : z) j[c.key()] = Json::array({v.real(), v.imag()});
  return j;
}

WeightedSet weighted_set_from_json(const Json& j) {
  const Family f = family_of(j);
  if (!j.contains("elements") || !j["elements"].is_array()) throw DomainError("weighted set lacks \"elements\"");
  WeightedSet w;
  for (const auto& e : j["elements"]) {
    if (!e.is_object() || !e.contains("w")) throw DomainError("weighted element needs a payload and \"w\"");
    const char* key = payload_key(f);
    if (!e.contains(key)) throw DomainError(std::string("weighted element lacks \"") + key + "\"");
    w.elements.push_back(payload_from_json(f, e[key]));
    w.weights.push_back(e["w"].get<double>());
  }
  w.validate();
  return w;
}

Json weighted_set_to_json(const WeightedSet& w) {
  Json j;
  const Family f = w.elements.empty() ? Family::Integer : w.elements.front().family();
  j["family"] = std::string(family_tag(f));
  Json arr = Json::array();
  for (std::size_t i = 0; i < w.elements.size(); ++i) {
    Json e;
    e[payload_key(f)] = payload_to_json(w.elements[i]);
    e["w"] = w.weights[i];
    arr.push_back(std::move(e));
  }
  j["elements"] = std::move(arr);
  return j;
}

Json certificate_to_json(const NormCertificate& c) {
  Json j;
  j["quantity"] = c.quantity;
  if (c.quantity == "Lp") j["p"] = c.p;
  j["value"] = c.value;
  j["lower"] = c.lower;
  j["upper"] = c.upper;
  j["method"] = c.method;
  j["grid"] = c.grid;
  j["exact"] = c.exact;
  j["converged"] = c.converged;
  if (c.samples) {
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["standard_error"] = c.standard_error;
  }
  return j;
}

namespace {

Json chars(std::span<const Character> s) {
  Json arr = Json::array();
  for (const auto& c : s) arr.push_back(payload_to_json(c));
  return arr;
}

}  // namespace

Json qi_extraction_to_json(const QiExtraction& e) {
  Json j;
  j["B"] = chars(e.B);
  j["D"] = chars(e.D);
  j["removed"] = e.removed ? relation_to_json(*e.removed) : Json(nullptr);
  j["attempts"] = e.attempts;
  j["eta"] = e.eta;
  j["ell"] = e.ell;
  j["height_limit"] = e.height_limit;
  return j;
}

Json trace_to_json(const PipelineTrace& t) {
  Json j;
  j["R"] = t.R;
  j["totals"] = {{"w", t.total}, {"w1", t.total1}, {"w2", t.total2}, {"w3", t.total3}, {"w4", t.total4},
                 {"w5", t.total5}};
  Json buckets = Json::array();
  for (const auto& b : t.buckets) {
    buckets.push_back({{"k", b.k}, {"A", chars(b.A)}, {"B", chars(b.B)}, {"strategy", b.strategy},
                       {"attempts", b.attempts}});
  }
  j["buckets"] = std::move(buckets);
  j["b_achieved"] = t.b_achieved;
  Json grades = Json::array();
  for (const auto& g : t.grades) grades.push_back({{"grade", g.grade}, {"k", g.k}, {"size", g.B.size()}});
  j["grades"] = std::move(grades);
  Json blocks = Json::array();
  for (const auto& b : t.split.blocks)
    blocks.push_back({{"j", b.index}, {"grade", b.grade}, {"k", b.k}, {"size", b.elements.size()}});
  j["parity"] = {{"class", t.split.even ? "even" : "odd"}, {"blocks", std::move(blocks)}};
  j["base"] = {{"done", t.base.done}, {"base_share", t.base.base_share}, {"chosen", chars(t.base.chosen)}};
  Json s2 = Json::array();
  for (const auto& s : t.stage2) {
    Json caps = Json::array();
    for (Int c : s.caps) caps.push_back(int_to_json(c));
    s2.push_back({{"j", s.index},
                  {"A", chars(s.A)},
                  {"attempts", s.attempts},
                  {"height_threshold", s.height_threshold},
                  {"caps", std::move(caps)},
                  {"forbidden_mitm", s.forbidden_mitm},
                  {"forbidden_recount", s.forbidden_recount},
                  {"rejections", s.rejections}});
  }
  j["stage2"] = std::move(s2);
  Json s3 = Json::array();
  for (const auto& s : t.stage3) {
    Json rho = Json::array();
    for (const auto& w : s.rho) rho.push_back(word_to_json(w));
    s3.push_back({{"j", s.index},
                  {"kept", chars(s.kept)},
                  {"support", chars(s.support)},
                  {"sigma_eps", s.sigma},
                  {"sigma_height", s.sigma_height},
                  {"rho", std::move(rho)}});
  }
  j["stage3"] = std::move(s3);
  Json checks = Json::array();
  for (const auto& c : t.checks) checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  j["checks"] = std::move(checks);
  return j;
}

Json cb_certificate_to_json(const CbCertificate& c) {
  Json j;
  j["chosen"] = set_to_json(c.chosen);
  j["ratio"] = c.ratio;
  j["b_achieved"] = c.b_achieved;
  j["R"] = c.R;
  j["branch"] = c.done_branch ? "base" : "pipeline";
  j["c_done"] = c.c_done;
  j["c_pipeline"] = c.c_pipeline;
  j["c_theoretical"] = c.c_theoretical;
  j["qi_verified"] = c.qi_verified;
  j["qi_strategy"] = c.qi_strategy;
  j["all_checks_hold"] = c.all_checks_hold;
  return j;
}

namespace {

std::string read_text(const std::string& arg) {
  std::size_t i = 0;
  while (i < arg.size() && std::isspace(static_cast<unsigned char>(arg[i]))) ++i;
  if (i < arg.size() && (arg[i] == '{' || arg[i] == '[')) return arg;
  std::ifstream in(arg, std::ios::binary);
  if (!in) throw DomainError("cannot read input '" + arg + "' (not inline JSON and not a readable file)");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("malformed JSON in " + where + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace

Json load_json_argument(const std::string& arg) {
  const std::string text = read_text(arg);
  return parse_text(text, text == arg ? "inline argument" : arg);
}

std::vector<Json> load_json_documents(const std::string& arg) {
  const std::string text = read_text(arg);
  const std::string where = text == arg ? "inline argument" : arg;
  try {
    return {Json::parse(text)};
  } catch (const nlohmann::json::parse_error&) {
  }
  std::vector<Json> docs;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    docs.push_back(parse_text(line, where + " line " + std::to_string(lineno)));
  }
  if (docs.empty()) parse_text(text, where);
  return docs;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sidonlab
