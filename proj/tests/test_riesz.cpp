#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sidonlab/errors.hpp"
#include "sidonlab/norms.hpp"
#include "sidonlab/riesz.hpp"
#include "sidonlab/rng.hpp"

using namespace sidonlab;

namespace {

std::vector<Character> Z(std::initializer_list<long long> v) {
  std::vector<Character> out;
  for (long long x : v) out.push_back(Character::integer(x));
  return out;
}

Complex coef(const FourierExpansion& f, long long n) { return f.coefficient(Character::integer(n)); }

// Brute-force coefficient of R_{a,z} restricted to sum eps = slice.
Complex slice_oracle(const std::vector<long long>& x, const std::vector<Complex>& z, double a, long long gamma,
                     std::optional<int> slice) {
  Complex total{};
  std::vector<int> e(x.size(), -1);
  for (;;) {
    long long v = 0;
    int s = 0;
    Complex c{1.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      v += e[i] * x[i];
      s += e[i];
      if (e[i] == 1) c *= a / 2 * z[i];
      if (e[i] == -1) c *= a / 2 * std::conj(z[i]);
    }
    if (v == gamma && (!slice || s == *slice)) total += c;
    std::size_t i = 0;
    while (i < e.size() && e[i] == 1) e[i++] = -1;
    if (i == e.size()) return total;
    ++e[i];
  }
}

}  // namespace

TEST_CASE("Riesz product coefficients") {
  const auto one = riesz_product(Z({1}));
  CHECK(coef(one, 0).real() == doctest::Approx(1.0));
  CHECK(coef(one, 1).real() == doctest::Approx(0.5));
  CHECK(coef(one, -1).real() == doctest::Approx(0.5));
  const auto r = riesz_product(Z({1, 2, 4}));
  CHECK(coef(r, 7).real() == doctest::Approx(1.0 / 8));
  CHECK(coef(r, 1).real() == doctest::Approx(7.0 / 8));
  CHECK(coef(r, 0).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(riesz_product(Z({1, 2, 3})), NotQuasiIndependent);
}

TEST_CASE("starred slice") {
  const double a = 1 / std::sqrt(3.0);
  const auto s = riesz_star(Z({1, 2, 4}), RieszParams{a, {}});
  CHECK(coef(s, 1).real() == doctest::Approx(a / 2));
  // 3 = 1 - 2 + 4 sits in the slice.
  CHECK(coef(s, 3).real() == doctest::Approx(a * a * a / 8));
  CHECK(std::abs(coef(s, 6)) < 1e-15);
  CHECK(std::abs(coef(s, 7)) < 1e-15);
  const auto s8 = riesz_star(Z({1, 2, 4, 8}), RieszParams{a, {}});
  CHECK(total_variation(s8).value <= 1.0 + 1e-9);
}

TEST_CASE("expansions match brute force on random phases") {
  Rng rng(5);
  const std::vector<long long> x{1, 3, 7, 15, 31};
  std::vector<Character> set;
  for (long long v : x) set.push_back(Character::integer(v));
  for (int trial = 0; trial < 5; ++trial) {
    RieszParams p{0.3 + 0.6 * rng.uniform(), {}};
    std::vector<Complex> z;
    for (const auto& c : set) z.push_back(p.z[c] = std::polar(1.0, 6.283185307179586 * rng.uniform()));
    const auto star = riesz_star(set, p);
    for (long long g = -60; g <= 60; ++g) {
      const Complex want = slice_oracle(x, z, p.a, g, 1);
      CHECK(std::abs(coef(star, g) - want) < 1e-14);
      CHECK(std::abs(riesz_coefficient(set, p, Character::integer(g), 1) - want) < 1e-14);
      CHECK(std::abs(riesz_coefficient(set, p, Character::integer(g)) - slice_oracle(x, z, p.a, g, std::nullopt)) <
            1e-14);
    }
  }
}

TEST_CASE("witness verification") {
  const double a = 1 / std::sqrt(3.0);
  Rng rng(17);
  const auto set = Z({2, 5, 11, 23, 47});
  PhaseMap z;
  for (const auto& c : set) z[c] = std::polar(1.0, 6.283185307179586 * rng.uniform());
  const auto mu = riesz_star(set, RieszParams{a, z});
  CHECK(verify_sidon_witness(set, z, mu, 1 / (3 * std::sqrt(3.0))).ok);

  const FourierExpansion zero(Family::Integer);
  const auto rep = verify_sidon_witness(Z({4}), {}, zero, 0.25);
  CHECK_FALSE(rep.ok);
  CHECK(rep.min_margin == doctest::Approx(-0.25));

  FourierExpansion single(Family::Integer);
  const Complex zl = std::polar(1.0, 0.7);
  single.add(Character::integer(4), a / 2 * zl);
  const auto exact = verify_sidon_witness(Z({4}), PhaseMap{{Character::integer(4), zl}}, single, a / 2);
  CHECK(exact.ok);
  CHECK(std::abs(exact.min_margin) < 1e-15);
}

TEST_CASE("union of quasi-independent parts") {
  const double a = union_constant(2).a;
  const std::vector<std::vector<Character>> one{Z({1, 2, 4})};
  const std::vector<RieszParams> p1{RieszParams{a, {}}};
  const auto u1 = riesz_union(one, p1);
  const auto s1 = riesz_star(Z({1, 2, 4}), p1[0]);
  for (long long g = -7; g <= 7; ++g) CHECK(std::abs(coef(u1, g) - coef(s1, g)) < 1e-15);

  const std::vector<std::vector<Character>> parts{Z({1, 2}), Z({5})};
  const std::vector<RieszParams> p2{RieszParams{a, {}}, RieszParams{a, {}}};
  const auto u = riesz_union(parts, p2);
  const Complex c5 = coef(u, 5);
  CHECK(std::abs(c5 - 0.5 * a / 2) <= a * a * a);
  for (long long g : {1, 2, 5})
    CHECK(coef(u, g).real() >= 0.5 * (a / 2 - a * a * a / 2 - a * a * a) - 1e-12);
  const std::vector<std::vector<Character>> overlap{Z({1, 2}), Z({2})};
  CHECK_THROWS_AS(riesz_union(overlap, p2), DomainError);
}

TEST_CASE("constants") {
  const auto k3 = optimize_qi_constant(3);
  CHECK(k3.a == doctest::Approx(0.57735).epsilon(1e-5));
  CHECK(k3.S == doctest::Approx(5.19615).epsilon(1e-5));
  const auto k5 = optimize_qi_constant(5);
  CHECK(k5.a == doctest::Approx(0.6152).epsilon(1e-3));
  CHECK(k5.S == doctest::Approx(4.2656).epsilon(1e-4));
  CHECK(k5.S < k3.S);
  // a* maximises g on a fine grid.
  const auto g = [](double a) { return a / 2 - a * a * a / 8 - std::pow(a, 5) / 2; };
  for (int i = 1; i < 1000; ++i) CHECK(g(k5.a) >= g(i / 1000.0) - 1e-15);
  CHECK(union_constant(1).S == doctest::Approx(3 * std::sqrt(3.0)));
  CHECK(union_constant(2).S == doctest::Approx(18.0));
  CHECK(union_constant(3).S == doctest::Approx(34.86).epsilon(1e-3));
  CHECK_THROWS_AS(optimize_qi_constant(4), DomainError);
}

TEST_CASE("weighted constant and its printed form") {
  const auto cb = cb_sidon_constant(1.0);
  CHECK(cb.inv_S_derived == doctest::Approx(1.0 / 9));
  CHECK(cb.inv_S_printed == doctest::Approx(5.0 / 36));
  CHECK(std::abs(cb.inv_S_grid - 1.0 / 9) < 1e-6);
  CHECK(cb.discrepancy);
  CHECK(cb.inv_S() == doctest::Approx(1.0 / 9));
  CHECK(cb_sidon_constant(1e-6).inv_S_derived < 1e-8);
  for (double c : {0.1, 0.5, 1.0}) {
    const auto k = cb_sidon_constant(c, 1000);
    const auto h = [c](double a) { return c * (a / 2 - a * a * a / 2) - a * a * a; };
    for (int i = 1; i < 1000; ++i) CHECK(h(k.a) >= h(i / 1000.0) - 1e-15);
    CHECK(h(k.a) == doctest::Approx(k.inv_S_derived).epsilon(1e-12));
  }
}

TEST_CASE("Boolean Riesz products") {
  const std::vector<Character> r{Character::walsh({0}), Character::walsh({1})};
  const auto prod = riesz_product(r);
  // (1 + r0)(1 + r1): all four coefficients equal one.
  CHECK(prod.size() == 4);
  for (const auto& [c, v] : prod.terms()) CHECK(v.real() == doctest::Approx(1.0));
  const auto star = riesz_star(r, RieszParams{0.5, {}});
  CHECK(star.coefficient(Character::walsh({0})).real() == doctest::Approx(0.25));
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(riesz_star(Z({1}), RieszParams{1.5, {}}), DomainError);
  std::vector<Character> big;
  for (int j = 0; j < 21; ++j) big.push_back(Character::integer(Int{1} << j));
  CHECK_THROWS_AS(riesz_product(big), Error);
}
