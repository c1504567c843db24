#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sidonlab/fourier.hpp"

namespace sidonlab {

using Polynomial = FourierExpansion;

struct NormCertificate {
  std::string quantity;  // "A", "sup" or "Lp"
  double p = 0.0;        // exponent for Lp
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  std::uint64_t grid = 0;  // quadrature / sampling grid size, or 2^m for sign enumeration
  bool exact = false;
  bool converged = true;
  // Monte Carlo fields (zero otherwise).
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double standard_error = 0.0;
};

double norm_A(const Polynomial& f);

struct SupOptions {
  double tol = 1e-9;
  std::size_t max_grid = std::size_t{1} << 22;
  /// FreeAbelian polynomials have no rigorous upper bound beyond norm_A; with
  /// this set they raise UnsupportedCertification instead.
  bool require_rigorous = true;
  std::uint64_t seed = 0;
  std::uint64_t samples = 1 << 16;
};

/// Interval [lower, upper] for sup |f|. Integer family: grid maximum plus the
/// Bernstein corrections (first and second order), capped by norm_A.
/// Boolean family: exact over all sign patterns (at most 24 coordinates).
NormCertificate certified_sup_norm(const Polynomial& f, const SupOptions& options = {});

struct LpOptions {
  double rel_tol = 1e-8;
  std::size_t max_grid = std::size_t{1} << 22;
  std::uint64_t seed = 0;
  std::uint64_t samples = 1 << 18;
};

/// (integral |f|^p)^{1/p}: trapezoid with doubling (Integer), exact sign
/// average (Boolean), Monte Carlo with standard error (FreeAbelian).
NormCertificate lp_norm(const Polynomial& f, double p, const LpOptions& options = {});

/// Total mass of the density f, i.e. its L^1 norm, to 1e-9 relative.
NormCertificate total_variation(const Polynomial& f);

/// norm_A(f) / certified upper bound of sup |f|.
double sidon_lower_bound(const Polynomial& f, const SupOptions& options = {});

/// Values of f on a uniform grid of m points (m a power of two), Integer family.
void evaluate_grid(const Polynomial& f, std::size_t m, std::vector<double>& re, std::vector<double>& im);

/// Values of f at every point of the Cantor group restricted to the support
/// coordinates; index bit t is the t-th smallest coordinate.
void evaluate_cube(const Polynomial& f, std::vector<double>& re, std::vector<double>& im);

struct RademacherExtremal {
  int m = 0;
  std::vector<Complex> coefficients;  // rescaled so that the sign-sum sup is 1
  double raw_sup = 0.0;               // enumerated sup before rescaling
  double raw_ratio = 0.0;             // m sin(pi / 2m)
  double ratio = 0.0;                 // sum |a_j| after rescaling
};

/// Equal-arc polygon on the semicircle of diameter [0,1]; the sup over all
/// 2^m sign sums is enumerated exactly.
RademacherExtremal rademacher_extremal(int m);

/// max over signs of |sum +-a_j|, by enumeration of all 2^m patterns.
double sign_sum_sup(std::span<const Complex> a);

struct SubgaussianResult {
  double lhs = 0.0;  // (E|sum +-a_k|^q)^{1/q}
  double rhs = 0.0;  // sqrt(q) * ||a||_2
  double ratio = 0.0;
  bool exact = true;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// Exact over all sign patterns for at most 24 coefficients, Monte Carlo beyond.
SubgaussianResult subgaussian_check(std::span<const double> a, int q, std::uint64_t seed = 0,
                                    std::uint64_t samples = 1 << 20);

/// ||f||_p / (sqrt(p) ||f||_2), p > 2.
double rudin_ratio(const Polynomial& f, double p);

struct RudinScan {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};

/// rudin_ratio over random unimodular coefficient vectors on the set.
RudinScan rudin_ratio_batch(std::span<const Character> set, double p, std::size_t samples, std::uint64_t seed);

struct SandwichReport {
  double q = 0.0;
  double steinhaus = 0.0;  // ||sum a_k e^{2 pi i omega_k}||_{L^q(Omega)}
  double steinhaus_standard_error = 0.0;
  double group_side = 0.0;  // ||sum a_k lambda_k||_{L^q(G)}
  double ratio = 0.0;       // group_side / steinhaus
  double s_hyp = 0.0;
  bool within = false;  // 1/s_hyp <= ratio <= s_hyp
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
};

SandwichReport steinhaus_sandwich_mc(std::span<const Character> set, std::span<const Complex> a, double q,
                                     double s_hyp, std::uint64_t trials, std::uint64_t seed);

}  // namespace sidonlab
