#include "sidonlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "sidonlab/errors.hpp"
#include "sidonlab/kernels.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxCubeDim = 24;

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner() {
  static std::mutex m;
  return m;
}

// Above this many terms a full inverse FFT beats direct accumulation.
std::size_t dense_cutoff(std::size_t m) {
  std::size_t lg = 0;
  while ((std::size_t{1} << lg) < m) ++lg;
  return 4 * lg + 16;
}

std::size_t next_pow2(double x) {
  std::size_t m = 1;
  while (static_cast<double>(m) < x) m <<= 1;
  return m;
}

struct Spectrum {
  Int lo = 0;
  Int hi = 0;
  Int width() const { return checked_sub(hi, lo); }
};

Spectrum integer_spectrum(const Polynomial& f) {
  Spectrum s;
  bool first = true;
  for (const auto& [gamma, c] : f.terms()) {
    const Int n = gamma.value();
    if (first) {
      s.lo = s.hi = n;
      first = false;
    } else {
      s.lo = std::min(s.lo, n);
      s.hi = std::max(s.hi, n);
    }
  }
  return s;
}

bool even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0 && p <= 64; }

double power_mean(const std::vector<double>& re, const std::vector<double>& im, double p) {
  const std::size_t n = re.size();
  double total = 0.0;
  if (even_integer(p)) {
    total = kernels::active().sum_modulus_pow_even(re.data(), im.data(), n, static_cast<unsigned>(p / 2));
  } else {
    for (std::size_t j = 0; j < n; ++j) total += std::pow(std::hypot(re[j], im[j]), p);
  }
  return total / static_cast<double>(n);
}

std::vector<std::pair<Coordinate, double>> random_torus_point(const std::vector<Coordinate>& coords, Rng& rng) {
  std::vector<std::pair<Coordinate, double>> x;
  x.reserve(coords.size());
  for (Coordinate j : coords) x.emplace_back(j, rng.uniform());
  return x;
}

std::vector<Coordinate> torus_support(const Polynomial& f) {
  std::vector<Coordinate> coords;
  for (const auto& [gamma, c] : f.terms())
    for (const auto& [j, n] : gamma.coords()) coords.push_back(j);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

}  // namespace

double norm_A(const Polynomial& f) {
  double s = 0.0;
  for (const auto& [gamma, c] : f.terms()) s += std::abs(c);
  return s;
}

void evaluate_grid(const Polynomial& f, std::size_t m, std::vector<double>& re, std::vector<double>& im) {
  if (f.family() != Family::Integer) throw DomainError("grid evaluation needs the integer family");
  if (m == 0 || (m & (m - 1)) != 0) throw DomainError("grid size must be a power of two");
  std::vector<double> c_re, c_im;
  std::vector<std::uint64_t> freq;
  const Int mm = static_cast<Int>(m);
  for (const auto& [gamma, c] : f.terms()) {
    Int r = gamma.value() % mm;
    if (r < 0) r += mm;
    freq.push_back(static_cast<std::uint64_t>(r));
    c_re.push_back(c.real());
    c_im.push_back(c.imag());
  }
  re.assign(m, 0.0);
  im.assign(m, 0.0);
  if (freq.size() > dense_cutoff(m)) {
    fftw_complex* buf = fftw_alloc_complex(m);
    for (std::size_t j = 0; j < m; ++j) buf[j][0] = buf[j][1] = 0.0;
    for (std::size_t k = 0; k < freq.size(); ++k) {
      buf[freq[k]][0] += c_re[k];
      buf[freq[k]][1] += c_im[k];
    }
    fftw_plan plan;
    {
      std::lock_guard lock(fftw_planner());
      plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    for (std::size_t j = 0; j < m; ++j) {
      re[j] = buf[j][0];
      im[j] = buf[j][1];
    }
    {
      std::lock_guard lock(fftw_planner());
      fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return;
  }
  std::vector<double> tw_re(m), tw_im(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double angle = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(m);
    tw_re[r] = std::cos(angle);
    tw_im[r] = std::sin(angle);
  }
  kernels::active().accumulate_terms(c_re.data(), c_im.data(), freq.data(), freq.size(), tw_re.data(),
                                     tw_im.data(), m, re.data(), im.data());
}

void evaluate_cube(const Polynomial& f, std::vector<double>& re, std::vector<double>& im) {
  if (f.family() != Family::Boolean) throw DomainError("cube evaluation needs the Boolean family");
  std::vector<Coordinate> coords;
  for (const auto& [gamma, c] : f.terms()) coords.insert(coords.end(), gamma.indices().begin(), gamma.indices().end());
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  if (coords.size() > kMaxCubeDim)
    throw CapacityError("sign enumeration limited to " + std::to_string(kMaxCubeDim) + " coordinates");
  const std::size_t n = std::size_t{1} << coords.size();
  re.assign(n, 0.0);
  im.assign(n, 0.0);
  for (const auto& [gamma, c] : f.terms()) {
    std::size_t mask = 0;
    for (Coordinate j : gamma.indices())
      mask |= std::size_t{1} << (std::lower_bound(coords.begin(), coords.end(), j) - coords.begin());
    re[mask] += c.real();
    im[mask] += c.imag();
  }
  kernels::active().fwht(re.data(), n);
  kernels::active().fwht(im.data(), n);
}

NormCertificate certified_sup_norm(const Polynomial& f, const SupOptions& options) {
  NormCertificate cert;
  cert.quantity = "sup";
  const double a_norm = norm_A(f);
  if (f.empty()) {
    cert.method = "empty";
    cert.exact = true;
    return cert;
  }
  std::vector<double> re, im;
  switch (f.family()) {
    case Family::Boolean: {
      evaluate_cube(f, re, im);
      const double v = std::sqrt(kernels::active().max_modulus_sq(re.data(), im.data(), re.size()));
      cert.value = cert.lower = cert.upper = v;
      cert.method = "sign-enumeration";
      cert.grid = re.size();
      cert.exact = true;
      return cert;
    }
    case Family::FreeAbelian: {
      if (options.require_rigorous)
        throw UnsupportedCertification("no rigorous sup-norm bound for the free abelian family");
      const std::vector<Coordinate> coords = torus_support(f);
      Rng rng(options.seed);
      double best = 0.0;
      for (std::uint64_t s = 0; s < options.samples; ++s)
        best = std::max(best, std::abs(f.evaluate(GroupPoint::torus(random_torus_point(coords, rng)))));
      cert.lower = best;
      cert.upper = a_norm;
      cert.value = best;
      cert.method = "monte-carlo-lower/norm-A-upper";
      cert.seed = options.seed;
      cert.samples = options.samples;
      cert.converged = false;
      return cert;
    }
    case Family::Integer:
      break;
  }

  const Spectrum spec = integer_spectrum(f);
  const double d = to_double(spec.width());
  if (spec.width() == 0) {
    cert.value = cert.lower = cert.upper = a_norm;
    cert.method = "single-frequency";
    cert.exact = true;
    cert.grid = 1;
    return cert;
  }
  const double start = std::min(8 * kPi * d, static_cast<double>(options.max_grid));
  std::size_t m = std::min(options.max_grid, std::max<std::size_t>(64, next_pow2(start)));
  for (;;) {
    evaluate_grid(f, m, re, im);
    const double grid_max = std::sqrt(kernels::active().max_modulus_sq(re.data(), im.data(), m));
    const double md = static_cast<double>(m);
    double upper = a_norm;
    std::string method = "norm-A";
    const double first = kPi * d / (2 * md);
    if (first < 1) {
      const double u1 = grid_max / (1 - first);
      if (u1 < upper) {
        upper = u1;
        method = "grid+bernstein-1";
      }
    }
    const double second = kPi * kPi * d * d / (2 * md * md);
    if (second < 1) {
      const double u2 = grid_max / std::sqrt(1 - second);
      if (u2 < upper) {
        upper = u2;
        method = "grid+bernstein-2";
      }
    }
    cert.lower = grid_max;
    cert.upper = std::max(upper, grid_max);
    cert.value = 0.5 * (cert.lower + cert.upper);
    cert.method = method;
    cert.grid = m;
    if (cert.upper - cert.lower <= options.tol) break;
    if (m >= options.max_grid) {
      cert.converged = false;
      break;
    }
    m <<= 1;
  }
  return cert;
}

NormCertificate lp_norm(const Polynomial& f, double p, const LpOptions& options) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("lp_norm: p must be finite and >= 1");
  NormCertificate cert;
  cert.quantity = "Lp";
  cert.p = p;
  if (f.empty()) {
    cert.method = "empty";
    cert.exact = true;
    return cert;
  }
  std::vector<double> re, im;
  switch (f.family()) {
    case Family::Boolean: {
      evaluate_cube(f, re, im);
      cert.value = std::pow(power_mean(re, im, p), 1.0 / p);
      cert.method = "sign-enumeration";
      cert.grid = re.size();
      cert.exact = true;
      break;
    }
    case Family::FreeAbelian: {
      const std::vector<Coordinate> coords = torus_support(f);
      Rng rng(options.seed);
      double sum = 0.0, sum_sq = 0.0;
      for (std::uint64_t s = 0; s < options.samples; ++s) {
        const double v = std::pow(std::abs(f.evaluate(GroupPoint::torus(random_torus_point(coords, rng)))), p);
        sum += v;
        sum_sq += v * v;
      }
      const double n = static_cast<double>(options.samples);
      const double mean = sum / n;
      const double var = std::max(0.0, sum_sq / n - mean * mean);
      const double se_mean = std::sqrt(var / std::max(1.0, n - 1));
      cert.value = std::pow(mean, 1.0 / p);
      cert.standard_error = mean > 0 ? cert.value * se_mean / (p * mean) : 0.0;
      cert.method = "monte-carlo";
      cert.seed = options.seed;
      cert.samples = options.samples;
      break;
    }
    case Family::Integer: {
      const Spectrum spec = integer_spectrum(f);
      const double d = to_double(spec.width());
      if (even_integer(p)) {
        // |f|^p has degree (p/2) d, so the trapezoid rule is exact beyond that.
        if (p / 2 * d + 1 > static_cast<double>(options.max_grid))
          throw CapacityError("lp_norm: exact quadrature grid exceeds the cap");
        const std::size_t m = std::max<std::size_t>(2, next_pow2(p / 2 * d + 1));
        if (m > options.max_grid) throw CapacityError("lp_norm: exact quadrature grid exceeds the cap");
        evaluate_grid(f, m, re, im);
        cert.value = std::pow(power_mean(re, im, p), 1.0 / p);
        cert.method = "trapezoid-exact";
        cert.grid = m;
        cert.exact = true;
        break;
      }
      if (4 * d + 4 > static_cast<double>(options.max_grid))
        throw CapacityError("lp_norm: quadrature grid exceeds the cap");
      std::size_t m = std::max<std::size_t>(16, next_pow2(4 * d + 4));
      if (m > options.max_grid) throw CapacityError("lp_norm: quadrature grid exceeds the cap");
      evaluate_grid(f, m, re, im);
      double prev = std::pow(power_mean(re, im, p), 1.0 / p);
      cert.converged = false;
      while (m < options.max_grid) {
        m <<= 1;
        evaluate_grid(f, m, re, im);
        const double cur = std::pow(power_mean(re, im, p), 1.0 / p);
        const bool done = std::abs(cur - prev) <= options.rel_tol * std::abs(cur);
        prev = cur;
        if (done) {
          cert.converged = true;
          break;
        }
      }
      cert.value = prev;
      cert.method = "trapezoid-doubling";
      cert.grid = m;
      break;
    }
  }
  cert.lower = cert.upper = cert.value;
  return cert;
}

NormCertificate total_variation(const Polynomial& f) {
  LpOptions opt;
  opt.rel_tol = 1e-9;
  return lp_norm(f, 1.0, opt);
}

double sidon_lower_bound(const Polynomial& f, const SupOptions& options) {
  const NormCertificate sup = certified_sup_norm(f, options);
  if (sup.upper <= 0) throw DomainError("sidon_lower_bound: zero polynomial");
  return norm_A(f) / sup.upper;
}

double rudin_ratio(const Polynomial& f, double p) {
  if (!(p > 2)) throw DomainError("rudin_ratio: p must exceed 2");
  const double l2 = lp_norm(f, 2).value;
  if (l2 <= 0) throw DomainError("rudin_ratio: zero polynomial");
  return lp_norm(f, p).value / (std::sqrt(p) * l2);
}

RudinScan rudin_ratio_batch(std::span<const Character> set, double p, std::size_t samples, std::uint64_t seed) {
  if (set.empty()) throw DomainError("rudin_ratio_batch: empty set");
  RudinScan scan;
  scan.p = p;
  scan.seed = seed;
  const Family family = common_family(set);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Polynomial f(family);
    for (const auto& c : set) f.add(c, std::polar(1.0, 2 * kPi * rng.uniform()));
    const double r = rudin_ratio(f, p);
    scan.ratios.push_back(r);
    scan.max_ratio = std::max(scan.max_ratio, r);
    total += r;
  }
  scan.mean_ratio = samples ? total / static_cast<double>(samples) : 0.0;
  return scan;
}

SandwichReport steinhaus_sandwich_mc(std::span<const Character> set, std::span<const Complex> a, double q,
                                     double s_hyp, std::uint64_t trials, std::uint64_t seed) {
  if (set.size() != a.size()) throw DomainError("sandwich: one coefficient per character is required");
  if (set.empty()) throw DomainError("sandwich: empty set");
  require_family(set, Family::Integer);
  if (!(q >= 1)) throw DomainError("sandwich: q must be >= 1");
  if (trials < 2) throw DomainError("sandwich: at least two trials are required");
  SandwichReport rep;
  rep.q = q;
  rep.s_hyp = s_hyp;
  rep.seed = seed;
  rep.trials = trials;

  Polynomial f(Family::Integer);
  for (std::size_t k = 0; k < set.size(); ++k) f.add(set[k], a[k]);
  rep.group_side = lp_norm(f, q).value;

  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Complex s{};
    for (const Complex& ak : a) s += ak * std::polar(1.0, 2 * kPi * rng.uniform());
    const double v = std::pow(std::abs(s), q);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double se_mean = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / (n - 1));
  rep.steinhaus = std::pow(mean, 1.0 / q);
  rep.steinhaus_standard_error = mean > 0 ? rep.steinhaus * se_mean / (q * mean) : 0.0;
  rep.ratio = rep.steinhaus > 0 ? rep.group_side / rep.steinhaus : 0.0;
  rep.within = rep.ratio >= 1.0 / s_hyp && rep.ratio <= s_hyp;
  return rep;
}

}  // namespace sidonlab
