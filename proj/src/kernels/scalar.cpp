#include <algorithm>

#include "sidonlab/kernels.hpp"

namespace sidonlab::kernels {

namespace {

void accumulate_terms(const double* c_re, const double* c_im, const std::uint64_t* freq, std::size_t terms,
                      const double* tw_re, const double* tw_im, std::size_t m, double* out_re, double* out_im) {
  const std::uint64_t mask = m - 1;
  for (std::size_t k = 0; k < terms; ++k) {
    const double cr = c_re[k], ci = c_im[k];
    const std::uint64_t step = freq[k] & mask;
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double tr = tw_re[idx], ti = tw_im[idx];
      out_re[j] += cr * tr - ci * ti;
      out_im[j] += cr * ti + ci * tr;
      idx = (idx + step) & mask;
    }
  }
}

double max_modulus_sq(const double* re, const double* im, std::size_t n) {
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) best = std::max(best, re[j] * re[j] + im[j] * im[j]);
  return best;
}

double sum_modulus_pow_even(const double* re, const double* im, std::size_t n, unsigned half_p) {
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r2 = re[j] * re[j] + im[j] * im[j];
    double v = 1.0;
    for (unsigned e = 0; e < half_p; ++e) v *= r2;
    total += v;
  }
  return total;
}

void fwht(double* data, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = data[j], y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{accumulate_terms, max_modulus_sq, sum_modulus_pow_even, fwht};
  return t;
}

}  // namespace sidonlab::kernels
