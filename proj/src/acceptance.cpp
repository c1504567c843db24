#include "sidonlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "sidonlab/bourgain.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/norms.hpp"
#include "sidonlab/relations.hpp"
#include "sidonlab/riesz.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab::acceptance {

namespace {

// Pinned tolerances.
constexpr double kRieszTol = 1e-9;
constexpr double kMarginTol = 1e-12;
constexpr double kUnionSTol = 1e-6;
constexpr double kParsevalTol = 1e-8;
constexpr double kFourthMomentTol = 1e-6;
constexpr double kCbGridTol = 1e-6;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<Character> integers(std::span<const long long> v) {
  std::vector<Character> out;
  for (long long x : v) out.push_back(Character::integer(x));
  return out;
}

Complex unimodular(Rng& rng) {
  const double th = 2 * std::numbers::pi * rng.uniform();
  return {std::cos(th), std::sin(th)};
}

PhaseMap random_phases(std::span<const Character> set, Rng& rng) {
  PhaseMap z;
  for (const auto& c : set) z[c] = unimodular(rng);
  return z;
}

// Ratio-2 construction: lambda_{j+1} >= 2 lambda_j.
std::vector<long long> ratio_two(std::size_t n, Rng& rng, long long start_max = 9) {
  std::vector<long long> v{1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(start_max)))};
  while (v.size() < n) v.push_back(2 * v.back() + static_cast<long long>(rng.below(static_cast<std::uint64_t>(v.back()) + 1)));
  return v;
}

// Plain 3^n scan over eps for sum eps x = 0.
bool naive_qi(std::span<const long long> x) {
  const std::size_t n = x.size();
  std::vector<int> eps(n, -1);
  for (;;) {
    long long s = 0;
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      s += eps[i] * x[i];
      nonzero |= eps[i] != 0;
    }
    if (nonzero && s == 0) return false;
    std::size_t i = 0;
    while (i < n && eps[i] == 1) eps[i++] = -1;
    if (i == n) return true;
    ++eps[i];
  }
}

// Meet in the middle: a relation exists iff some pair of half sums cancels
// beyond the empty/empty pair.
bool mitm_qi(std::span<const Character> set) {
  std::vector<Int> x;
  for (const auto& c : set) x.push_back(c.value());
  auto sums = [](std::span<const Int> v) {
    std::vector<Int> out{0};
    for (Int e : v) {
      const std::size_t m = out.size();
      for (std::size_t i = 0; i < m; ++i) out.push_back(out[i] + e), out.push_back(out[i] - e);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const std::size_t half = x.size() / 2;
  const std::vector<Int> left = sums(std::span<const Int>(x).first(half));
  const std::vector<Int> right = sums(std::span<const Int>(x).subspan(half));
  std::uint64_t pairs = 0;
  for (Int v : left) {
    const auto [lo, hi] = std::equal_range(right.begin(), right.end(), -v);
    pairs += static_cast<std::uint64_t>(hi - lo);
    if (pairs > 1) return false;
  }
  return true;
}

void fft(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1 : -1);
    const Complex w{std::cos(ang), std::sin(ang)};
    for (std::size_t i = 0; i < n; i += len) {
      Complex wk{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k], v = a[i + k + len / 2] * wk;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        wk *= w;
      }
    }
  }
}

// Max |coef(f) - DFT of samples| over all frequencies of the grid.
double compare_with_grid(const FourierExpansion& f, std::vector<Complex> samples) {
  const std::size_t M = samples.size();
  fft(samples, false);
  double worst = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    const long long freq = k < M / 2 ? static_cast<long long>(k) : static_cast<long long>(k) - static_cast<long long>(M);
    worst = std::max(worst, std::abs(samples[k] / static_cast<double>(M) - f.coefficient(Character::integer(freq))));
  }
  return worst;
}

// --------------------------------------------------------------------------

Outcome qi_oracles(const Options&) {
  Outcome o{1, "qi oracle equivalence", false, "", 0};
  std::size_t sets = 0, mismatches = 0;
  for (unsigned mask = 0; mask < (1u << 12); ++mask) {
    const int size = std::popcount(mask);
    if (size < 2 || size > 6) continue;
    std::vector<long long> x;
    for (int b = 0; b < 12; ++b)
      if (mask >> b & 1) x.push_back(b + 1);
    const auto set = integers(x);
    const bool ladder = is_quasi_independent(set).qi;
    const bool fast = qi_decide_fast_z(set).qi;
    const bool naive = naive_qi(x);
    ++sets;
    if (ladder != naive || fast != naive) ++mismatches;
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(sets) + " sets of size 2-6, " + std::to_string(mismatches) + " mismatches";
  return o;
}

Outcome riesz_cross_check(const Options& options) {
  Outcome o{2, "Riesz coefficients vs grid DFT", false, "", 0};
  const std::vector<long long> x{1, 2, 4, 8, 16};
  const auto set = integers(x);
  constexpr std::size_t M = 1 << 12;
  const double step = 1.0 / M;

  std::vector<Complex> samples(M);
  for (std::size_t i = 0; i < M; ++i) {
    double p = 1.0;
    for (long long l : x) p *= 1.0 + std::cos(2 * std::numbers::pi * static_cast<double>(l) * step * static_cast<double>(i));
    samples[i] = p;
  }
  double worst = compare_with_grid(riesz_product(set), samples);

  Rng rng(substream_seed(options.seed, 2));
  const double a = 1.0 / std::sqrt(3.0);
  const int T = static_cast<int>(x.size()) + 2;  // rotations; aliasing needs |s - 1| < T
  for (int trial = 0; trial < 20; ++trial) {
    RieszParams params{a, random_phases(set, rng)};
    std::vector<Complex> star(M, Complex{});
    for (int r = 0; r < T; ++r) {
      const double th = 2 * std::numbers::pi * r / T;
      const Complex rot{std::cos(th), std::sin(th)};
      for (std::size_t i = 0; i < M; ++i) {
        const double t = step * static_cast<double>(i);
        Complex p{1.0, 0.0};
        for (std::size_t j = 0; j < x.size(); ++j) {
          const Complex z = params.z.at(set[j]) * rot;
          const Complex e{std::cos(2 * std::numbers::pi * static_cast<double>(x[j]) * t),
                          std::sin(2 * std::numbers::pi * static_cast<double>(x[j]) * t)};
          p *= 1.0 + a * (z * e).real();
        }
        star[i] += std::conj(rot) * p / static_cast<double>(T);
      }
    }
    worst = std::max(worst, compare_with_grid(riesz_star(set, params), std::move(star)));
  }
  o.pass = worst <= kRieszTol;
  o.detail = "max abs deviation " + fmt("%.3e", worst) + " (tol 1e-9), product + 20 starred";
  return o;
}

Outcome witness_bound(const Options& options) {
  Outcome o{3, "witness bound S = 3 sqrt3", false, "", 0};
  Rng rng(substream_seed(options.seed, 3));
  const ConstantChoice k3 = optimize_qi_constant(3);
  const double a = options.tamper ? k3.a / 2 : k3.a;
  const double bound = 1.0 / k3.S;
  double worst = std::numeric_limits<double>::infinity();
  double worst_mass = 0.0;
  for (int s = 0; s < 10; ++s) {
    const auto set = integers(ratio_two(8, rng));
    for (int p = 0; p < 100; ++p) {
      RieszParams params{a, random_phases(set, rng)};
      const FourierExpansion mu = riesz_star(set, params);
      worst = std::min(worst, verify_sidon_witness(set, params.z, mu, bound).min_margin);
      if (p == 0) worst_mass = std::max(worst_mass, total_variation(mu).value);
    }
  }
  const ConstantChoice k5 = optimize_qi_constant(5);
  const bool s5 = k5.S >= 4.26 && k5.S <= 4.28;
  o.pass = worst >= -kMarginTol && worst_mass <= 1.0 + 1e-9 && s5;
  o.detail = "min margin " + fmt("%.6g", worst) + ", max mass " + fmt("%.9f", worst_mass) + ", order-5 S " +
             fmt("%.6f", k5.S) + (options.tamper ? " (tampered amplitude)" : "");
  return o;
}

Outcome union_bound(const Options& options) {
  Outcome o{4, "union constant", false, "", 0};
  Rng rng(substream_seed(options.seed, 4));
  bool ok = true;
  std::ostringstream detail;
  for (int k : {2, 3}) {
    const ConstantChoice uc = union_constant(k);
    const double a = uc.a;
    const double bound = (a / 2 - a * a * a / 2 - (k - 1) * a * a * a) / k;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20;) {
      std::vector<std::vector<Character>> parts;
      std::vector<Character> all;
      const long long scale[] = {1, 101, 103};
      for (int i = 0; i < k; ++i) {
        std::vector<long long> v = ratio_two(6, rng);
        for (auto& e : v) e *= scale[i];
        parts.push_back(integers(v));
      }
      for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
      std::sort(all.begin(), all.end());
      if (std::adjacent_find(all.begin(), all.end()) != all.end()) continue;
      ++trial;
      std::vector<RieszParams> params;
      PhaseMap z;
      for (const auto& p : parts) {
        params.push_back(RieszParams{a, random_phases(p, rng)});
        z.insert(params.back().z.begin(), params.back().z.end());
      }
      const FourierExpansion mu = riesz_union(parts, params);
      worst = std::min(worst, verify_sidon_witness(all, z, mu, bound).min_margin);
    }
    const double implied = 1.0 / bound;
    const double expected = 3 * std::sqrt(3.0) * k * std::sqrt(2.0 * k - 1);
    const bool pass_k = worst >= -kMarginTol && std::abs(implied - expected) <= kUnionSTol &&
                        std::abs(uc.S - expected) <= kUnionSTol;
    ok = ok && pass_k;
    detail << "k=" << k << ": min margin " << fmt("%.6g", worst) << ", S " << fmt("%.6f", implied) << "; ";
  }
  o.pass = ok;
  o.detail = detail.str();
  return o;
}

Outcome rademacher(const Options&) {
  Outcome o{5, "Rademacher ratio approaches pi/2", false, "", 0};
  const int ms[] = {1, 2, 8, 16};
  const double floors[] = {1.0, 1.414, 1.56, 1.569};
  bool ok = true;
  std::ostringstream detail;
  for (int i = 0; i < 4; ++i) {
    const RademacherExtremal r = rademacher_extremal(ms[i]);
    const double sup = sign_sum_sup(r.coefficients);
    const bool pass_m = r.ratio >= floors[i] && std::abs(sup - 1.0) <= 1e-12 && r.ratio < std::numbers::pi / 2;
    ok = ok && pass_m;
    if (i) detail << "; ";
    detail << "m=" << ms[i] << " ratio " << fmt("%.6f", r.ratio);
    if (!pass_m) detail << " < floor " << floors[i];
  }
  o.pass = ok;
  o.detail = detail.str();
  return o;
}

std::vector<std::vector<long long>> extractor_corpus(std::uint64_t seed) {
  std::vector<std::vector<long long>> corpus;
  Rng rng(seed);
  for (int i = 0; i < 17; ++i) {
    const long long a = 1 + static_cast<long long>(rng.below(20)), d = 1 + static_cast<long long>(rng.below(7));
    const std::size_t n = 12 + rng.below(29);
    std::vector<long long> v;
    for (std::size_t k = 0; k < n; ++k) v.push_back(a + static_cast<long long>(k) * d);
    corpus.push_back(v);
  }
  for (int i = 0; i < 17; ++i) {
    const std::size_t n = 12 + rng.below(29);
    std::vector<long long> v;
    while (v.size() < n) {
      const long long x = 1 + static_cast<long long>(rng.below(200));
      if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    }
    corpus.push_back(v);
  }
  for (int i = 0; i < 16; ++i) {
    const std::size_t n = 12 + rng.below(29);
    std::vector<long long> v{1 + static_cast<long long>(rng.below(5))};
    while (v.size() < n) v.push_back(v.back() + 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(v.back()) / 2 + 1)));
    corpus.push_back(v);
  }
  return corpus;
}

Outcome extractor(const Options& options) {
  Outcome o{6, "(CR) to (CP) extractor", false, "", 0};
  const auto corpus = extractor_corpus(substream_seed(options.seed, 6));
  int failures = 0, non_qi = 0;
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto set = integers(corpus[i]);
    ExtractParams params;
    params.seed = substream_seed(options.seed, 600 + i);
    try {
      const QiExtraction e = extract_qi_random(set, params);
      bool good = qi_decide_fast_z(e.B).qi && naive_qi([&] {
        std::vector<long long> v;
        for (const auto& c : e.B) v.push_back(static_cast<long long>(c.value()));
        return v;
      }());
      for (const auto& c : e.B) good = good && std::find(set.begin(), set.end(), c) != set.end();
      if (e.removed)
        for (const auto& c : e.removed->support()) good = good && std::find(e.B.begin(), e.B.end(), c) == e.B.end();
      if (!good) ++non_qi;
      ratio_sum += static_cast<double>(e.B.size()) / static_cast<double>(set.size());
    } catch (const ExtractionFailure&) {
      ++failures;
    }
  }
  const double mean = ratio_sum / static_cast<double>(corpus.size());
  o.pass = failures == 0 && non_qi == 0 && mean >= 0.02;
  o.detail = std::to_string(corpus.size()) + " instances, " + std::to_string(failures) + " failures, " +
             std::to_string(non_qi) + " non-qi, mean |B|/|L| " + fmt("%.4f", mean);
  return o;
}

WeightedSet curated_instance(int variant, std::uint64_t seed) {
  std::vector<long long> small{3, 7, 19, 45};
  double w_small = 1.0, w_mid = 0.5, w_big = 0.25;
  Rng rng(substream_seed(seed, static_cast<std::uint64_t>(variant)));
  if (variant > 0) {
    small.clear();
    long long sum = 0;
    while (small.size() < 4) {
      const long long x = sum + 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(sum) + 8));
      if (x == 1 || x % 2 == 0 || x % 5 == 0) continue;
      small.push_back(x);
      sum += x;
    }
    auto jitter = [&](double base) { return base * (1.0 + 0.999 * rng.uniform()); };
    w_small = jitter(1.0), w_mid = jitter(0.5), w_big = jitter(0.25);
  }
  WeightedSet w;
  for (long long x : small) w.elements.push_back(Character::integer(x)), w.weights.push_back(w_small);
  for (int j = 0; j < 16; ++j) w.elements.push_back(Character::integer(5LL << j)), w.weights.push_back(w_mid);
  for (int j = 0; j < 64; ++j) w.elements.push_back(Character::integer(Int{1} << j)), w.weights.push_back(w_big);
  return w;
}

Outcome pipeline(const Options& options) {
  Outcome o{7, "(CP) to (CB) pipeline", false, "", 0};
  int bad = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double slowest = 0.0;
  std::string first_problem;
  for (int v = 0; v <= 20; ++v) {
    const auto start = std::chrono::steady_clock::now();
    ExtractParams params;
    params.R = 4;
    params.seed = substream_seed(options.seed, 700 + static_cast<std::uint64_t>(v));
    std::string problem;
    try {
      const WeightedSet w = curated_instance(v, options.seed);
      const CbResult r = cb_extract(w, params);
      const CbCertificate& c = r.certificate;
      if (c.chosen.size() > 30) problem = "chosen set too large for the independent check";
      else if (!mitm_qi(c.chosen)) problem = "chosen set not qi";
      const double floor = c.b_achieved / (16 * c.R);
      worst_margin = std::min(worst_margin, c.ratio / floor);
      if (c.ratio < floor) problem = "ratio below b/(16R)";
      if (!c.all_checks_hold) problem = "stage inequality violated";
      if (!c.done_branch && r.trace.checks.size() < 5) problem = "missing stage checks";
      for (const auto& s2 : r.trace.stage2) {
        const auto [mitm, recount] = stage2_forbidden(s2.A, static_cast<std::size_t>(&s2 - r.trace.stage2.data()),
                                                      r.trace.base.blocks, params.relations);
        if (mitm != 0 || recount != 0 || s2.forbidden_recount != 0) problem = "stage-2 recount nonzero";
      }
    } catch (const Error& e) {
      problem = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    slowest = std::max(slowest, secs);
    if (secs > 300) problem = "over 5 minutes";
    if (!problem.empty()) {
      ++bad;
      if (first_problem.empty()) first_problem = "variant " + std::to_string(v) + ": " + problem;
    }
  }
  o.pass = bad == 0;
  o.detail = "21 instances, " + std::to_string(bad) + " bad, min ratio/(b/16R) " + fmt("%.3f", worst_margin) +
             ", slowest " + fmt("%.2fs", slowest) + (first_problem.empty() ? "" : "; " + first_problem);
  return o;
}

Outcome norm_sanity(const Options& options) {
  Outcome o{8, "norm sanity", false, "", 0};
  Rng rng(substream_seed(options.seed, 8));
  double parseval = 0.0;
  for (int i = 0; i < 100; ++i) {
    FourierExpansion f(Family::Integer);
    const std::size_t terms = 1 + rng.below(12);
    double l2 = 0.0;
    for (std::size_t t = 0; t < terms; ++t) {
      const Complex c{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      const Character ch = Character::integer(static_cast<long long>(rng.below(201)) - 100);
      f.add(ch, c);
    }
    for (const auto& [ch, c] : f.terms()) l2 += std::norm(c);
    const double want = std::sqrt(l2);
    if (want > 0) parseval = std::max(parseval, std::abs(lp_norm(f, 2).value - want) / want);
  }
  double worst_ratio = 0.0;
  int cases = 0;
  for (int q : {2, 4, 6, 8})
    for (int i = 0; i < 50; ++i) {
      std::vector<double> a(1 + rng.below(20));
      for (double& x : a) x = 2 * rng.uniform() - 1;
      worst_ratio = std::max(worst_ratio, subgaussian_check(a, q).ratio);
      ++cases;
    }
  FourierExpansion g(Family::Integer);
  std::vector<long long> freq;
  for (int j = 0; j < 8; ++j) g.add(Character::integer(1LL << j), 1.0), freq.push_back(1LL << j);
  long long quadruples = 0;
  for (long long a : freq)
    for (long long b : freq)
      for (long long c : freq)
        for (long long d : freq) quadruples += a + b == c + d;
  const double m4 = std::pow(lp_norm(g, 4).value, 4);
  o.pass = parseval <= kParsevalTol && worst_ratio <= 1.0 && quadruples == 120 &&
           std::abs(m4 - 120.0) <= kFourthMomentTol;
  o.detail = "Parseval rel err " + fmt("%.2e", parseval) + ", max subgaussian ratio " + fmt("%.4f", worst_ratio) +
             " over " + std::to_string(cases) + " cases, ||f||_4^4 " + fmt("%.9f", m4) + " (pairs " +
             std::to_string(quadruples) + ")";
  return o;
}

Outcome cb_constant(const Options&) {
  Outcome o{9, "cb constant discrepancy", false, "", 0};
  const CbConstant c = cb_sidon_constant(1.0);
  o.pass = std::abs(c.inv_S_derived - 1.0 / 9) <= 1e-15 && std::abs(c.inv_S_printed - 0.1389) <= 5e-5 &&
           std::abs(c.inv_S_grid - c.inv_S_derived) <= kCbGridTol && c.discrepancy;
  o.detail = "derived 1/S " + fmt("%.9f", c.inv_S_derived) + ", printed " + fmt("%.6f", c.inv_S_printed) +
             ", grid " + fmt("%.9f", c.inv_S_grid) + (c.discrepancy ? ", discrepancy flagged" : ", NOT flagged");
  return o;
}

}  // namespace

Outcome run_criterion(int id, const Options& options) {
  using Fn = Outcome (*)(const Options&);
  static constexpr Fn table[] = {qi_oracles, riesz_cross_check, witness_bound, union_bound, rademacher,
                                 extractor,  pipeline,          norm_sanity,   cb_constant};
  if (id < 1 || id > kCriteria) throw DomainError("acceptance criterion must be 1-9");
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = table[id - 1](options);
  } catch (const std::exception& e) {
    o = Outcome{id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0};
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

std::vector<int> quick_subset() { return {1, 2, 3, 4, 5, 8, 9}; }

std::vector<Outcome> run_all(const Options& options) {
  std::vector<int> ids;
  if (options.quick)
    ids = quick_subset();
  else
    for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
  std::vector<Outcome> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_line(const Outcome& o) {
  return std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(o.id) + " (" + o.name + "): " +
         o.detail + " [" + fmt("%.2fs", o.seconds) + "]";
}

}  // namespace sidonlab::acceptance
