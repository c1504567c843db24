#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "sidonlab/errors.hpp"
#include "sidonlab/kernels.hpp"
#include "sidonlab/rng.hpp"

using namespace sidonlab;
using namespace sidonlab::kernels;

namespace {

std::vector<double> randoms(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = 2 * rng.uniform() - 1;
  return v;
}

void twiddles(std::size_t m, std::vector<double>& re, std::vector<double>& im) {
  re.resize(m);
  im.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double t = 2 * 3.141592653589793 * static_cast<double>(r) / static_cast<double>(m);
    re[r] = std::cos(t);
    im[r] = std::sin(t);
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("dispatch honours the override") {
  const char* env = std::getenv("SIDONLAB_ISA");
  if (env && std::string(env) == "scalar") CHECK(active_isa() == Isa::Scalar);
  CHECK(isa_available(Isa::Scalar));
  CHECK(isa_name(Isa::Scalar) == "scalar");
  CHECK(&table(Isa::Scalar) == &scalar_table());
  if (!isa_available(Isa::Avx2)) CHECK_THROWS_AS(table(Isa::Avx2), DomainError);
}

TEST_CASE("scalar reference values") {
  const auto& s = scalar_table();
  std::vector<double> d{1, 0, 0, 0};
  s.fwht(d.data(), 4);
  for (double x : d) CHECK(x == 1.0);
  std::vector<double> e{1, 2, 3, 4};
  s.fwht(e.data(), 4);
  CHECK(e == std::vector<double>{10, -2, -4, 0});
  const double re[] = {3, 0, 1};
  const double im[] = {4, 2, 1};
  CHECK(s.max_modulus_sq(re, im, 3) == 25.0);
  CHECK(s.sum_modulus_pow_even(re, im, 3, 1) == 25.0 + 4.0 + 2.0);
  CHECK(s.sum_modulus_pow_even(re, im, 3, 2) == 625.0 + 16.0 + 4.0);

  // One term at frequency 1 is the twiddle table itself.
  std::vector<double> tr, ti;
  twiddles(8, tr, ti);
  const double c_re = 1, c_im = 0;
  const std::uint64_t f = 1;
  std::vector<double> out_re(8, 0.0), out_im(8, 0.0);
  s.accumulate_terms(&c_re, &c_im, &f, 1, tr.data(), ti.data(), 8, out_re.data(), out_im.data());
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(out_re[j] == tr[j]);
    CHECK(out_im[j] == ti[j]);
  }
}

TEST_CASE("AVX2 matches the scalar reference") {
  if (!isa_available(Isa::Avx2)) return;
#if SIDONLAB_HAS_AVX2
  const auto& s = scalar_table();
  const auto& v = avx2_table();
  Rng rng(99);
  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 33u, 1000u, 4096u}) {
    const auto re = randoms(rng, n), im = randoms(rng, n);
    CHECK(s.max_modulus_sq(re.data(), im.data(), n) == v.max_modulus_sq(re.data(), im.data(), n));
    for (unsigned h : {1u, 2u, 3u})
      CHECK(rel(s.sum_modulus_pow_even(re.data(), im.data(), n, h), v.sum_modulus_pow_even(re.data(), im.data(), n, h)) <
            1e-12);
  }
  for (std::size_t n : {1u, 2u, 4u, 8u, 64u, 1024u}) {
    auto a = randoms(rng, n);
    auto b = a;
    s.fwht(a.data(), n);
    v.fwht(b.data(), n);
    CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
  }
  for (std::size_t m : {4u, 8u, 256u, 2048u}) {
    std::vector<double> tr, ti;
    twiddles(m, tr, ti);
    const std::size_t terms = 1 + rng.below(40);
    const auto cr = randoms(rng, terms), ci = randoms(rng, terms);
    std::vector<std::uint64_t> freq(terms);
    for (auto& x : freq) x = rng.below(1u << 20);
    std::vector<double> ar(m, 0.5), ai(m, -0.5), br(m, 0.5), bi(m, -0.5);
    s.accumulate_terms(cr.data(), ci.data(), freq.data(), terms, tr.data(), ti.data(), m, ar.data(), ai.data());
    v.accumulate_terms(cr.data(), ci.data(), freq.data(), terms, tr.data(), ti.data(), m, br.data(), bi.data());
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(std::abs(ar[j] - br[j]) < 1e-12);
      CHECK(std::abs(ai[j] - bi[j]) < 1e-12);
    }
  }
#endif
}
