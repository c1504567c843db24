#include "sidonlab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sidonlab/errors.hpp"

namespace sidonlab {

NotQuasiIndependent::NotQuasiIndependent(EpsilonRelation witness)
    : DomainError("set is not quasi-independent (relation of height " + std::to_string(witness.height()) + ")"),
      witness_(std::move(witness)) {}

Complex RieszParams::phase(const Character& lambda) const {
  auto it = z.find(lambda);
  return it == z.end() ? Complex{1.0, 0.0} : it->second;
}

void RieszParams::validate() const {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("Riesz amplitude must lie in (0,1)");
  for (const auto& [lambda, zl] : z)
    if (std::abs(std::abs(zl) - 1.0) > 1e-12) throw DomainError("Riesz phase for " + lambda.key() + " is not unimodular");
}

namespace {

std::vector<Character> require_qi(std::span<const Character> set, const RelationOptions& options) {
  std::vector<Character> sorted = canonical_set(set);
  if (sorted.size() > kRieszMaxSize)
    throw CapacityError("symbolic Riesz expansion limited to " + std::to_string(kRieszMaxSize) + " characters");
  QiResult qi = is_quasi_independent(sorted, options);
  if (!qi.qi) throw NotQuasiIndependent(*qi.witness);
  return sorted;
}

// Expands prod (1 + h z lambda + h conj(z) lambda^{-1}) keeping track of the
// signed sum s = sum eps. With `slice` set, only s == *slice survives.
FourierExpansion expand(const std::vector<Character>& set, Family family, double half_a,
                        const std::function<Complex(const Character&)>& phase, std::optional<int> slice,
                        std::uint64_t capacity) {
  std::map<std::pair<Character, int>, Complex> cur;
  cur.emplace(std::pair{Character::identity(family), 0}, Complex{1.0, 0.0});
  const int n = static_cast<int>(set.size());
  for (int i = 0; i < n; ++i) {
    const Character& lambda = set[static_cast<std::size_t>(i)];
    const Character inv = lambda.inverse();
    const Complex zp = half_a * phase(lambda);
    const Complex zm = std::conj(zp);
    const int remaining = n - i - 1;
    std::map<std::pair<Character, int>, Complex> next;
    auto put = [&](Character gamma, int s, Complex c) {
      if (slice && std::abs(s - *slice) > remaining) return;
      next[{std::move(gamma), s}] += c;
    };
    for (const auto& [key, c] : cur) {
      const auto& [gamma, s] = key;
      put(gamma, s, c);
      const Factor plus[2] = {{gamma, 1}, {lambda, 1}};
      const Factor minus[2] = {{gamma, 1}, {inv, 1}};
      put(word_product(plus), s + 1, c * zp);
      put(word_product(minus), s - 1, c * zm);
    }
    if (next.size() > capacity) throw CapacityError("Riesz expansion exceeds capacity");
    cur = std::move(next);
  }
  FourierExpansion out(family);
  for (const auto& [key, c] : cur) out.add(key.first, c);
  out.normalise();
  return out;
}

}  // namespace

FourierExpansion riesz_product(std::span<const Character> set, const RelationOptions& options) {
  std::vector<Character> sorted = require_qi(set, options);
  const Family family = sorted.empty() ? Family::Integer : sorted.front().family();
  FourierExpansion r =
      expand(sorted, family, 0.5, [](const Character&) { return Complex{1.0, 0.0}; }, std::nullopt, options.capacity);
  if (r.coefficient(Character::identity(family)) != Complex{1.0, 0.0})
    throw Error("Riesz product: identity coefficient differs from 1");
  return r;
}

FourierExpansion riesz_star(std::span<const Character> set, const RieszParams& params,
                            const RelationOptions& options) {
  params.validate();
  std::vector<Character> sorted = require_qi(set, options);
  const Family family = sorted.empty() ? Family::Integer : sorted.front().family();
  return expand(
      sorted, family, params.a / 2, [&](const Character& l) { return params.phase(l); }, 1, options.capacity);
}

Complex riesz_coefficient(std::span<const Character> set, const RieszParams& params, const Character& gamma,
                          std::optional<int> slice) {
  params.validate();
  std::vector<Character> sorted = canonical_set(set);
  if (sorted.empty()) return gamma.is_identity() && (!slice || *slice == 0) ? Complex{1.0, 0.0} : Complex{};
  const Family family = sorted.front().family();
  if (gamma.family() != family) throw DomainError("coefficient query: family mismatch");
  const double h = params.a / 2;
  const std::size_t n = sorted.size();

  if (family != Family::Integer) {
    const FourierExpansion full = expand(
        sorted, family, h, [&](const Character& l) { return params.phase(l); }, slice, default_capacity());
    return full.coefficient(gamma);
  }

  // Depth-first over eps with a reachability bound on the remaining sum.
  std::vector<Int> vals;
  std::vector<Complex> zs;
  for (const auto& c : sorted) {
    vals.push_back(c.value());
    zs.push_back(h * params.phase(c));
  }
  std::vector<Int> tail(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) tail[i] = checked_add(tail[i + 1], abs_value(vals[i]));
  const Int target = gamma.value();
  Complex total{};
  std::function<void(std::size_t, Int, int, Complex)> rec = [&](std::size_t i, Int sum, int s, Complex c) {
    const Int gap = abs_value(checked_sub(target, sum));
    if (gap > tail[i]) return;
    if (slice && std::abs(s - *slice) > static_cast<int>(n - i)) return;
    if (i == n) {
      if (gap == 0 && (!slice || s == *slice)) total += c;
      return;
    }
    rec(i + 1, sum, s, c);
    rec(i + 1, checked_add(sum, vals[i]), s + 1, c * zs[i]);
    rec(i + 1, checked_sub(sum, vals[i]), s - 1, c * std::conj(zs[i]));
  };
  rec(0, 0, 0, Complex{1.0, 0.0});
  return total;
}

FourierExpansion riesz_union(std::span<const std::vector<Character>> parts, std::span<const RieszParams> params,
                             const RelationOptions& options) {
  if (parts.empty()) throw DomainError("riesz_union: no parts");
  if (parts.size() != params.size()) throw DomainError("riesz_union: one parameter set per part is required");
  std::vector<Character> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw DomainError("riesz_union: parts overlap");
  common_family(all);

  FourierExpansion out(all.front().family());
  const double k = static_cast<double>(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) out += riesz_star(parts[i], params[i], options).scaled(1.0 / k);
  out.normalise();
  return out;
}

WitnessReport verify_sidon_witness(std::span<const Character> set, const PhaseMap& z, const FourierExpansion& mu,
                                   double bound) {
  WitnessReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& lambda : set) {
    auto it = z.find(lambda);
    const Complex zl = it == z.end() ? Complex{1.0, 0.0} : it->second;
    const double margin = (std::conj(zl) * mu.coefficient(lambda)).real() - bound;
    report.margins.emplace_back(lambda, margin);
    report.min_margin = std::min(report.min_margin, margin);
  }
  if (set.empty()) report.min_margin = 0.0;
  report.ok = report.min_margin >= -1e-12;
  return report;
}

ConstantChoice optimize_qi_constant(int order) {
  if (order == 3) {
    const double a = 1.0 / std::sqrt(3.0);
    return {a, 3.0 * std::sqrt(3.0)};
  }
  if (order == 5) {
    auto g = [](double a) { return a / 2 - a * a * a / 8 - std::pow(a, 5) / 2; };
    auto dg = [](double a) { return 0.5 - 3 * a * a / 8 - 2.5 * std::pow(a, 4); };
    double lo = 0.0, hi = 1.0;  // dg(0) > 0 > dg(1), dg decreasing
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dg(mid) > 0 ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    return {a, 1.0 / g(a)};
  }
  throw DomainError("optimize_qi_constant: order must be 3 or 5");
}

ConstantChoice union_constant(int k) {
  if (k < 1) throw DomainError("union_constant: k must be positive");
  const double kk = k;
  return {1.0 / std::sqrt(3.0 * (2 * kk - 1)), 3.0 * std::sqrt(3.0) * kk * std::sqrt(2 * kk - 1)};
}

CbConstant cb_sidon_constant(double c, std::size_t grid_points) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("cb_sidon_constant: c must lie in (0,1]");
  CbConstant out;
  out.c = c;
  out.a = std::sqrt(c / (3 * (c + 2)));
  const double common = std::pow(c, 1.5) / std::sqrt(c + 2);
  out.inv_S_printed = common * (6 - c) / (12 * std::sqrt(3.0));
  out.inv_S_derived = common / (3 * std::sqrt(3.0));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(grid_points);
    best = std::max(best, c * (a / 2 - a * a * a / 2) - a * a * a);
  }
  out.inv_S_grid = best;
  out.discrepancy = std::abs(out.inv_S_printed - out.inv_S_derived) > 1e-12;
  return out;
}

}  // namespace sidonlab
