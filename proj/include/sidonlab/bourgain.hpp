#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sidonlab/relations.hpp"

namespace sidonlab {

/// Finite character set with positive weights (aligned with `elements`).
struct WeightedSet {
  std::vector<Character> elements;
  std::vector<double> weights;

  double total() const;
  /// Weight of a subset, looked up by character; throws on foreign elements.
  double weight_of(std::span<const Character> subset) const;
  void validate() const;
};

enum class CpOracle { Auto, Exact, Random };

struct ExtractParams {
  double C = 1.0;         // Rudin constant hypothesis
  double R = 0.0;         // gradation ratio; <= 0 selects default_gradation_ratio()
  int max_attempts = 64;  // resampling cap for every Las Vegas step
  std::uint64_t seed = 0;
  CpOracle oracle = CpOracle::Auto;
  RelationOptions relations;

  double eta() const;  // 1 / (4 C e)
  void validate() const;
};

/// Smallest integer R >= 2 with 2 sum_{m>=1} R^{-m} log(20 R^{2m}) < ln2 / 20.
int default_gradation_ratio();

// ---------------------------------------------------------------------------
// (CR) => (CP)

struct QiExtraction {
  std::vector<Character> B;
  std::vector<Character> D;                  // accepted draw
  std::optional<EpsilonRelation> removed;    // maximal relation whose support was dropped
  int attempts = 0;
  double eta = 0.0;
  double ell = 0.0;
  int height_limit = 0;  // floor(ell): relations above it are forbidden in D
};

/// Bernoulli(eta) selection, rejection unless |D| > eta|set|/2 and D has no
/// relation of height > ell, then removal of a maximal relation's support.
/// Throws ExtractionFailure after max_attempts draws.
QiExtraction extract_qi_random(std::span<const Character> set, const ExtractParams& params,
                               std::uint64_t stream = 0);

/// Largest quasi-independent subset by exhaustive search (ties: first subset in
/// lexicographic order of the sorted set). Limited to 20 elements.
std::vector<Character> max_qi_subset(std::span<const Character> set, const RelationOptions& options = {});

// ---------------------------------------------------------------------------
// (CP) => (CB), first stage

struct Bucket {
  int k = 0;  // weight level 2^-k
  std::vector<Character> A;
  std::vector<Character> B;
  std::string strategy;
  int attempts = 0;
};

struct DyadicRounding {
  WeightedSet rounded;
  std::vector<Bucket> buckets;  // ascending k, only A filled
};

DyadicRounding dyadic_round(const WeightedSet& w);

struct CpThinning {
  std::vector<Bucket> buckets;  // with B filled
  double b_achieved = 1.0;
};

CpThinning cp_thin(std::vector<Bucket> buckets, const ExtractParams& params);

struct GradeChoice {
  int grade = 0;  // j with R^j <= |B_k| < R^{j+1}
  int k = 0;      // k(j), the smallest level in the grade
  std::vector<Character> B;
};

std::vector<GradeChoice> geometric_thin(const std::vector<Bucket>& buckets, double R);

struct Block {
  int index = 0;  // j in Lambda_j
  int grade = 0;
  int k = 0;
  std::vector<Character> elements;
  double weight() const;  // |elements| 2^-k
};

struct ParitySplit {
  bool even = true;
  std::vector<Block> blocks;  // ascending index
};

ParitySplit parity_split(const std::vector<GradeChoice>& grades);

struct BaseDecision {
  bool done = false;
  std::vector<Character> chosen;  // Lambda' when done
  double base_share = 0.0;        // w4(Lambda_0) / w4(Lambda)
  std::vector<Block> blocks;      // remaining blocks when proceeding
};

BaseDecision handle_base(const ParitySplit& split);

// ---------------------------------------------------------------------------
// Second and third stages

struct Stage2Result {
  int index = 0;
  std::vector<Character> A;
  int attempts = 0;
  int height_threshold = 0;        // forbidden sigma have height >= this
  std::vector<Int> caps;           // floor(|Lambda_j|^2 / |Lambda_k|) per other block
  std::uint64_t forbidden_mitm = 0;     // count by meet-in-the-middle
  std::uint64_t forbidden_recount = 0;  // count by ordered depth-first search
  std::vector<std::string> rejections;  // reason per rejected draw
};

/// Forbidden-relation count for a candidate A of block `index`, returned as
/// (meet-in-the-middle count, depth-first recount).
std::pair<std::uint64_t, std::uint64_t> stage2_forbidden(std::span<const Character> A, std::size_t index,
                                                          const std::vector<Block>& blocks,
                                                          const RelationOptions& options);

Stage2Result stage2_select(std::size_t index, const std::vector<Block>& blocks, std::uint64_t seed,
                           const ExtractParams& params);

struct Stage3Result {
  int index = 0;
  std::vector<Character> kept;     // Lambda'_j
  std::vector<Character> support;  // S_j
  std::vector<int> sigma;          // eps of the chosen sigma over sorted A_j (empty when none)
  int sigma_height = 0;
  std::vector<SignedWord> rho;     // one word per other block
};

std::vector<Stage3Result> stage3_prune(const std::vector<std::vector<Character>>& A,
                                       const std::vector<Block>& blocks, const RelationOptions& options = {});

// ---------------------------------------------------------------------------

struct StageCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct PipelineTrace {
  double R = 0.0;
  double total = 0.0;
  double total1 = 0.0, total2 = 0.0, total3 = 0.0, total4 = 0.0, total5 = 0.0;
  std::vector<Bucket> buckets;
  double b_achieved = 1.0;
  std::vector<GradeChoice> grades;
  ParitySplit split;
  BaseDecision base;
  std::vector<Stage2Result> stage2;
  std::vector<Stage3Result> stage3;
  std::vector<StageCheck> checks;
};

struct CbCertificate {
  std::vector<Character> chosen;  // Lambda'
  double ratio = 0.0;             // w(Lambda') / w(Lambda)
  double b_achieved = 1.0;
  double R = 0.0;
  double c_done = 0.0;      // b / (16 R)
  double c_pipeline = 0.0;  // b / (160 R), the bound for the full pipeline
  double c_theoretical = 0.0;
  bool done_branch = false;
  bool qi_verified = false;
  std::string qi_strategy;
  bool all_checks_hold = false;
};

struct CbResult {
  CbCertificate certificate;
  PipelineTrace trace;
};

/// Full (CP) => (CB) pipeline on an integer weighted set.
CbResult cb_extract(const WeightedSet& w, const ExtractParams& params);

}  // namespace sidonlab
