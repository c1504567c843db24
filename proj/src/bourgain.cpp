#include "sidonlab/bourgain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "sidonlab/errors.hpp"
#include "sidonlab/json_io.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab {

namespace {

constexpr double kSlack = 1e-12;

bool at_least(double lhs, double rhs) { return lhs >= rhs - kSlack * std::max(1.0, std::abs(rhs)); }

StageCheck check(std::string name, double lhs, double rhs) {
  return StageCheck{std::move(name), lhs, rhs, at_least(lhs, rhs)};
}

double level_weight(int k) { return std::ldexp(1.0, -k); }

std::vector<Character> minus(const std::vector<Character>& a, std::span<const Character> remove) {
  std::vector<Character> out;
  for (const auto& c : a)
    if (std::find(remove.begin(), remove.end(), c) == remove.end()) out.push_back(c);
  return out;
}

}  // namespace

double WeightedSet::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double WeightedSet::weight_of(std::span<const Character> subset) const {
  double s = 0.0;
  for (const auto& c : subset) {
    auto it = std::find(elements.begin(), elements.end(), c);
    if (it == elements.end()) throw DomainError("weight_of: " + c.key() + " is not in the weighted set");
    s += weights[static_cast<std::size_t>(it - elements.begin())];
  }
  return s;
}

void WeightedSet::validate() const {
  if (elements.size() != weights.size()) throw DomainError("weighted set: one weight per element is required");
  if (elements.empty()) throw DomainError("weighted set is empty");
  canonical_set(elements);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].is_identity()) throw DomainError("weighted set contains the identity");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw DomainError("weight of " + elements[i].key() + " must be positive and finite");
  }
}

double ExtractParams::eta() const { return 1.0 / (4.0 * C * std::numbers::e); }

void ExtractParams::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw DomainError("C must be positive");
  const double e = eta();
  if (!(e > 0.0 && e < 1.0)) throw DomainError("eta = 1/(4Ce) must lie in (0,1)");
  if (R > 0.0 && !(R > 1.0)) throw DomainError("R must exceed 1");
  if (max_attempts < 1) throw DomainError("max_attempts must be positive");
}

int default_gradation_ratio() {
  static const int value = [] {
    const double target = std::log(2.0) / 20.0;
    for (int R = 2;; ++R) {
      const double r = R;
      double s = 0.0;
      for (int m = 1; m < 200; ++m) {
        const double term = std::pow(r, -m) * (std::log(20.0) + 2.0 * m * std::log(r));
        s += term;
        if (term < 1e-18) break;
      }
      if (2.0 * s < target) return R;
    }
  }();
  return value;
}

// ---------------------------------------------------------------------------

QiExtraction extract_qi_random(std::span<const Character> set, const ExtractParams& params, std::uint64_t stream) {
  params.validate();
  const std::vector<Character> sorted = canonical_set(set);
  for (const auto& c : sorted) {
    if (c.is_identity()) throw DomainError("extract_qi_random: the identity is not allowed");
    if (has_order_two(c)) throw DomainError("extract_qi_random: order-two elements are not supported");
  }
  QiExtraction out;
  out.eta = params.eta();
  const double n = static_cast<double>(sorted.size());
  out.ell = out.eta * n / 4.0;
  out.height_limit = static_cast<int>(std::floor(out.ell));

  Rng rng(substream_seed(params.seed, stream));
  Json rejections = Json::array();
  for (int attempt = 1; attempt <= params.max_attempts; ++attempt) {
    std::vector<Character> D;
    for (const auto& c : sorted)
      if (rng.bernoulli(out.eta)) D.push_back(c);
    if (!(2.0 * static_cast<double>(D.size()) > out.eta * n)) {
      rejections.push_back({{"attempt", attempt}, {"reason", "size"}, {"size", D.size()}});
      continue;
    }
    const std::uint64_t high = count_relations_height_gt(D, out.height_limit, params.relations);
    if (high != 0) {
      rejections.push_back({{"attempt", attempt}, {"reason", "high relations"}, {"count", high}});
      continue;
    }
    out.attempts = attempt;
    out.D = D;
    if (out.height_limit >= 1) out.removed = max_height_relation(D, out.height_limit, params.relations);
    out.B = out.removed ? minus(D, out.removed->support()) : D;
    const QiResult qi = is_quasi_independent(out.B, params.relations);
    if (!qi.qi) throw Error("extract_qi_random: internal error, result is not quasi-independent");
    return out;
  }
  Json diag;
  diag["set_size"] = sorted.size();
  diag["eta"] = out.eta;
  diag["ell"] = out.ell;
  diag["max_attempts"] = params.max_attempts;
  diag["seed"] = params.seed;
  diag["stream"] = stream;
  diag["rejections"] = std::move(rejections);
  throw ExtractionFailure("extract_qi_random: no acceptable draw in " + std::to_string(params.max_attempts) +
                              " attempts",
                          diag.dump());
}

std::vector<Character> max_qi_subset(std::span<const Character> set, const RelationOptions& options) {
  const std::vector<Character> sorted = canonical_set(set);
  const std::size_t n = sorted.size();
  if (n > 20) throw CapacityError("max_qi_subset: exhaustive search limited to 20 elements");
  for (std::size_t size = n; size > 0; --size) {
    // Index combinations in lexicographic order.
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      std::vector<Character> sub;
      for (std::size_t i : idx) sub.push_back(sorted[i]);
      if (is_quasi_independent(sub, options).qi) return sub;
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t t = i; t < size; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

DyadicRounding dyadic_round(const WeightedSet& w) {
  w.validate();
  DyadicRounding out;
  out.rounded.elements = w.elements;
  std::map<int, std::vector<Character>> by_level;
  for (std::size_t i = 0; i < w.elements.size(); ++i) {
    int e = 0;
    std::frexp(w.weights[i], &e);  // w in [2^(e-1), 2^e)
    const int k = 1 - e;
    out.rounded.weights.push_back(level_weight(k));
    by_level[k].push_back(w.elements[i]);
  }
  for (auto& [k, elems] : by_level) {
    std::sort(elems.begin(), elems.end());
    out.buckets.push_back(Bucket{k, std::move(elems), {}, {}, 0});
  }
  return out;
}

CpThinning cp_thin(std::vector<Bucket> buckets, const ExtractParams& params) {
  CpThinning out;
  for (auto& b : buckets) {
    if (b.A.empty()) continue;
    if (is_quasi_independent(b.A, params.relations).qi) {
      b.B = b.A;
      b.strategy = "already-qi";
    } else {
      CpOracle oracle = params.oracle;
      if (oracle == CpOracle::Auto) oracle = b.A.size() <= 16 ? CpOracle::Exact : CpOracle::Random;
      if (oracle == CpOracle::Exact) {
        b.B = max_qi_subset(b.A, params.relations);
        b.strategy = "exact";
      } else {
        const QiExtraction e =
            extract_qi_random(b.A, params, 0x5eed0000ULL + static_cast<std::uint64_t>(static_cast<std::int64_t>(b.k)));
        b.B = e.B;
        b.attempts = e.attempts;
        b.strategy = "random";
      }
    }
    out.b_achieved =
        std::min(out.b_achieved, static_cast<double>(b.B.size()) / static_cast<double>(b.A.size()));
    out.buckets.push_back(std::move(b));
  }
  return out;
}

std::vector<GradeChoice> geometric_thin(const std::vector<Bucket>& buckets, double R) {
  if (!(R > 1.0)) throw DomainError("geometric_thin: R must exceed 1");
  std::map<int, GradeChoice> grades;
  for (const auto& b : buckets) {
    if (b.B.empty()) continue;
    const double size = static_cast<double>(b.B.size());
    int j = 0;
    while (std::pow(R, j + 1) <= size) ++j;
    auto it = grades.find(j);
    if (it == grades.end() || b.k < it->second.k) grades[j] = GradeChoice{j, b.k, b.B};
  }
  std::vector<GradeChoice> out;
  for (auto& [j, g] : grades) out.push_back(std::move(g));
  return out;
}

double Block::weight() const { return static_cast<double>(elements.size()) * level_weight(k); }

ParitySplit parity_split(const std::vector<GradeChoice>& grades) {
  double even = 0.0, odd = 0.0;
  for (const auto& g : grades) (g.grade % 2 == 0 ? even : odd) += static_cast<double>(g.B.size()) * level_weight(g.k);
  ParitySplit out;
  out.even = even >= odd;
  for (const auto& g : grades) {
    if ((g.grade % 2 == 0) != out.even) continue;
    const int index = out.even ? g.grade / 2 : (g.grade + 1) / 2;
    out.blocks.push_back(Block{index, g.grade, g.k, g.B});
  }
  return out;
}

BaseDecision handle_base(const ParitySplit& split) {
  BaseDecision out;
  double total = 0.0;
  for (const auto& b : split.blocks) total += b.weight();
  const Block* base = nullptr;
  for (const auto& b : split.blocks)
    if (b.index == 0) base = &b;
  out.base_share = base && total > 0 ? base->weight() / total : 0.0;
  if (base && 2.0 * base->weight() >= total) {
    out.done = true;
    out.chosen = base->elements;
    return out;
  }
  if (split.blocks.size() == 1) {
    out.done = true;
    out.chosen = split.blocks.front().elements;
    return out;
  }
  for (const auto& b : split.blocks)
    if (b.index != 0) out.blocks.push_back(b);
  return out;
}

// ---------------------------------------------------------------------------

CbResult cb_extract(const WeightedSet& w, const ExtractParams& params) {
  w.validate();
  params.validate();
  require_family(w.elements, Family::Integer);
  CbResult result;
  PipelineTrace& t = result.trace;
  t.R = params.R > 0 ? params.R : static_cast<double>(default_gradation_ratio());
  t.total = w.total();

  DyadicRounding d = dyadic_round(w);
  t.total1 = d.rounded.total();
  t.checks.push_back(check("w1 >= w/2", t.total1, t.total / 2));

  CpThinning cp = cp_thin(std::move(d.buckets), params);
  t.buckets = cp.buckets;
  t.b_achieved = cp.b_achieved;
  for (const auto& b : t.buckets) t.total2 += static_cast<double>(b.B.size()) * level_weight(b.k);
  t.checks.push_back(check("w2 >= b w1", t.total2, t.b_achieved * t.total1));

  t.grades = geometric_thin(t.buckets, t.R);
  for (const auto& g : t.grades) t.total3 += static_cast<double>(g.B.size()) * level_weight(g.k);
  t.checks.push_back(check("w3 >= w2/(2R)", t.total3, t.total2 / (2 * t.R)));

  t.split = parity_split(t.grades);
  for (const auto& b : t.split.blocks) t.total4 += b.weight();
  t.checks.push_back(check("w4 >= w3/2", t.total4, t.total3 / 2));

  t.base = handle_base(t.split);
  CbCertificate& cert = result.certificate;
  cert.R = t.R;
  cert.b_achieved = t.b_achieved;
  cert.c_done = t.b_achieved / (16 * t.R);
  cert.c_pipeline = t.b_achieved / (160 * t.R);

  if (t.base.done) {
    cert.done_branch = true;
    cert.chosen = t.base.chosen;
    cert.c_theoretical = cert.c_done;
  } else {
    for (const auto& b : t.base.blocks) t.total5 += b.weight();
    t.checks.push_back(check("w5 >= w4/2", t.total5, t.total4 / 2));
    const auto& blocks = t.base.blocks;
    t.checks.push_back(check("|Lambda_1| >= R", static_cast<double>(blocks.front().elements.size()), t.R));
    for (std::size_t i = 1; i < blocks.size(); ++i) {
      t.checks.push_back(check("|Lambda_" + std::to_string(blocks[i].index) + "|/|Lambda_" +
                                   std::to_string(blocks[i - 1].index) + "| >= R",
                               static_cast<double>(blocks[i].elements.size()) /
                                   static_cast<double>(blocks[i - 1].elements.size()),
                               t.R));
    }
    std::vector<std::vector<Character>> A;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      Stage2Result s2 =
          stage2_select(i, blocks, substream_seed(params.seed, 0x2000 + static_cast<std::uint64_t>(blocks[i].index)),
                        params);
      if (s2.forbidden_mitm != s2.forbidden_recount)
        throw Error("stage 2: forbidden-relation counts disagree between enumeration orders");
      A.push_back(s2.A);
      t.stage2.push_back(std::move(s2));
    }
    t.stage3 = stage3_prune(A, blocks, params.relations);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& kept = t.stage3[i].kept;
      t.checks.push_back(check("|Lambda'_" + std::to_string(blocks[i].index) + "| >= |Lambda_" +
                                   std::to_string(blocks[i].index) + "|/10",
                               static_cast<double>(kept.size()), static_cast<double>(blocks[i].elements.size()) / 10));
      cert.chosen.insert(cert.chosen.end(), kept.begin(), kept.end());
    }
    std::sort(cert.chosen.begin(), cert.chosen.end());
    cert.c_theoretical = cert.c_pipeline;
  }

  const QiResult qi = is_quasi_independent(cert.chosen, params.relations);
  if (!qi.qi) throw Error("cb_extract: internal error, the extracted set is not quasi-independent");
  cert.qi_verified = true;
  cert.qi_strategy = qi.strategy;
  cert.ratio = w.weight_of(cert.chosen) / t.total;
  cert.all_checks_hold = std::all_of(t.checks.begin(), t.checks.end(), [](const StageCheck& c) { return c.holds; });
  return result;
}

}  // namespace sidonlab
