#include <cmath>
#include <numbers>

#include "sidonlab/errors.hpp"
#include "sidonlab/kernels.hpp"
#include "sidonlab/norms.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab {

namespace {

constexpr std::size_t kMaxSigns = 24;

// Walsh transform of a placed at indices 2^j: entry x is sum_j (-1)^{x_j} a_j.
void all_sign_sums(std::span<const Complex> a, std::vector<double>& re, std::vector<double>& im) {
  if (a.size() > kMaxSigns)
    throw CapacityError("sign enumeration limited to " + std::to_string(kMaxSigns) + " terms");
  const std::size_t n = std::size_t{1} << a.size();
  re.assign(n, 0.0);
  im.assign(n, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    re[std::size_t{1} << j] = a[j].real();
    im[std::size_t{1} << j] = a[j].imag();
  }
  kernels::active().fwht(re.data(), n);
  kernels::active().fwht(im.data(), n);
}

}  // namespace

double sign_sum_sup(std::span<const Complex> a) {
  std::vector<double> re, im;
  all_sign_sums(a, re, im);
  return std::sqrt(kernels::active().max_modulus_sq(re.data(), im.data(), re.size()));
}

RademacherExtremal rademacher_extremal(int m) {
  if (m < 1) throw DomainError("rademacher_extremal: m must be positive");
  if (static_cast<std::size_t>(m) > kMaxSigns) throw CapacityError("rademacher_extremal: m exceeds 24");
  RademacherExtremal out;
  out.m = m;
  auto vertex = [m](int t) {
    const double theta = std::numbers::pi * t / m;
    return Complex{(1 - std::cos(theta)) / 2, std::sin(theta) / 2};
  };
  std::vector<Complex> a;
  for (int t = 1; t <= m; ++t) a.push_back(vertex(t) - vertex(t - 1));
  out.raw_sup = sign_sum_sup(a);
  for (const Complex& x : a) out.raw_ratio += std::abs(x);
  for (Complex& x : a) x /= out.raw_sup;
  for (const Complex& x : a) out.ratio += std::abs(x);
  out.coefficients = std::move(a);
  return out;
}

SubgaussianResult subgaussian_check(std::span<const double> a, int q, std::uint64_t seed, std::uint64_t samples) {
  if (q < 1) throw DomainError("subgaussian_check: q must be positive");
  SubgaussianResult r;
  double l2 = 0.0;
  for (double x : a) l2 += x * x;
  r.rhs = std::sqrt(static_cast<double>(q)) * std::sqrt(l2);
  if (a.size() <= kMaxSigns) {
    std::vector<Complex> ac(a.begin(), a.end());
    std::vector<double> re, im;
    all_sign_sums(ac, re, im);
    double moment;
    if (q % 2 == 0) {
      moment = kernels::active().sum_modulus_pow_even(re.data(), im.data(), re.size(), static_cast<unsigned>(q / 2));
    } else {
      moment = 0.0;
      for (double v : re) moment += std::pow(std::abs(v), q);
    }
    r.lhs = std::pow(moment / static_cast<double>(re.size()), 1.0 / q);
    r.exact = true;
    r.samples = re.size();
  } else {
    Rng rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      double t = 0.0;
      for (double x : a) t += (rng.next() >> 63) ? x : -x;
      const double v = std::pow(std::abs(t), q);
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / std::max(1.0, n - 1));
    r.lhs = std::pow(mean, 1.0 / q);
    r.standard_error = mean > 0 ? r.lhs * se / (q * mean) : 0.0;
    r.exact = false;
    r.samples = samples;
  }
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

}  // namespace sidonlab
