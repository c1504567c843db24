#include <immintrin.h>

#include <algorithm>

#include "sidonlab/kernels.hpp"

namespace sidonlab::kernels {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
}

void accumulate_terms(const double* c_re, const double* c_im, const std::uint64_t* freq, std::size_t terms,
                      const double* tw_re, const double* tw_im, std::size_t m, double* out_re, double* out_im) {
  const std::uint64_t mask = m - 1;
  if (m < 4) {
    scalar_table().accumulate_terms(c_re, c_im, freq, terms, tw_re, tw_im, m, out_re, out_im);
    return;
  }
  const __m256i vmask = _mm256_set1_epi64x(static_cast<long long>(mask));
  for (std::size_t k = 0; k < terms; ++k) {
    const __m256d cr = _mm256_set1_pd(c_re[k]);
    const __m256d ci = _mm256_set1_pd(c_im[k]);
    const std::uint64_t step = freq[k] & mask;
    __m256i idx = _mm256_and_si256(
        _mm256_setr_epi64x(0, static_cast<long long>(step), static_cast<long long>(2 * step),
                           static_cast<long long>(3 * step)),
        vmask);
    const __m256i stride = _mm256_set1_epi64x(static_cast<long long>((4 * step) & mask));
    for (std::size_t j = 0; j < m; j += 4) {
      const __m256d tr = _mm256_i64gather_pd(tw_re, idx, 8);
      const __m256d ti = _mm256_i64gather_pd(tw_im, idx, 8);
      __m256d ore = _mm256_loadu_pd(out_re + j);
      __m256d oim = _mm256_loadu_pd(out_im + j);
      ore = _mm256_fmadd_pd(cr, tr, _mm256_fnmadd_pd(ci, ti, ore));
      oim = _mm256_fmadd_pd(cr, ti, _mm256_fmadd_pd(ci, tr, oim));
      _mm256_storeu_pd(out_re + j, ore);
      _mm256_storeu_pd(out_im + j, oim);
      idx = _mm256_and_si256(_mm256_add_epi64(idx, stride), vmask);
    }
  }
}

double max_modulus_sq(const double* re, const double* im, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d r = _mm256_loadu_pd(re + j);
    const __m256d i = _mm256_loadu_pd(im + j);
    best = _mm256_max_pd(best, _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i)));
  }
  double out = hmax(best);
  for (; j < n; ++j) out = std::max(out, re[j] * re[j] + im[j] * im[j]);
  return out;
}

double sum_modulus_pow_even(const double* re, const double* im, std::size_t n, unsigned half_p) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d r = _mm256_loadu_pd(re + j);
    const __m256d i = _mm256_loadu_pd(im + j);
    const __m256d r2 = _mm256_fmadd_pd(r, r, _mm256_mul_pd(i, i));
    __m256d v = one;
    for (unsigned e = 0; e < half_p; ++e) v = _mm256_mul_pd(v, r2);
    acc = _mm256_add_pd(acc, v);
  }
  double total = hsum(acc);
  if (j < n) total += scalar_table().sum_modulus_pow_even(re + j, im + j, n - j, half_p);
  return total;
}

void fwht(double* data, std::size_t n) {
  std::size_t h = 1;
  for (; h < n && h < 4; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = data[j], y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
  for (; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; j += 4) {
        const __m256d x = _mm256_loadu_pd(data + j);
        const __m256d y = _mm256_loadu_pd(data + j + h);
        _mm256_storeu_pd(data + j, _mm256_add_pd(x, y));
        _mm256_storeu_pd(data + j + h, _mm256_sub_pd(x, y));
      }
    }
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{accumulate_terms, max_modulus_sq, sum_modulus_pow_even, fwht};
  return t;
}

}  // namespace sidonlab::kernels
