#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sidonlab/errors.hpp"
#include "sidonlab/norms.hpp"
#include "sidonlab/rng.hpp"

using namespace sidonlab;

namespace {

Polynomial poly(std::initializer_list<std::pair<long long, Complex>> terms) {
  Polynomial f(Family::Integer);
  for (const auto& [n, c] : terms) f.add(Character::integer(n), c);
  return f;
}

Polynomial rademacher(std::span<const Complex> a) {
  Polynomial f(Family::Boolean);
  for (std::size_t j = 0; j < a.size(); ++j) f.add(Character::basis(Family::Boolean, static_cast<Coordinate>(j)), a[j]);
  return f;
}

}  // namespace

TEST_CASE("absolute coefficient sum") {
  CHECK(norm_A(poly({{1, 1.0}})) == 1.0);
  CHECK(norm_A(poly({{1, 1.0}, {2, -1.0}, {4, Complex{0, 1}}})) == doctest::Approx(3.0));
  CHECK(norm_A(Polynomial(Family::Integer)) == 0.0);
}

TEST_CASE("certified sup norm") {
  const auto e = certified_sup_norm(poly({{1, 1.0}}));
  CHECK(e.lower <= 1.0);
  CHECK(e.upper >= 1.0);
  CHECK(e.upper - e.lower <= 1e-9);
  const auto c = certified_sup_norm(poly({{1, 0.5}, {-1, 0.5}}));
  CHECK(c.lower <= 1.0 + 1e-12);
  CHECK(c.upper >= 1.0 - 1e-12);
  CHECK(c.upper - c.lower <= 1e-9);

  // Random polynomials: the interval brackets a dense-grid maximum.
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial f(Family::Integer);
    for (int t = 0; t < 6; ++t)
      f.add(Character::integer(static_cast<long long>(rng.below(41)) - 20), Complex{rng.uniform() - 0.5, rng.uniform()});
    const auto cert = certified_sup_norm(f);
    double best = 0.0;
    for (int i = 0; i < 20000; ++i) best = std::max(best, std::abs(f.evaluate(GroupPoint::circle(i / 20000.0))));
    CHECK(cert.lower >= best - 1e-6);
    CHECK(cert.upper >= best);
    CHECK(cert.upper <= norm_A(f) + 1e-12);
  }
}

TEST_CASE("sup norm of Rademacher sums is exact") {
  const std::vector<Complex> a{1.0, Complex{0, 2}, -0.5};
  const auto cert = certified_sup_norm(rademacher(a));
  CHECK(cert.exact);
  CHECK(cert.value == doctest::Approx(sign_sum_sup(a)));
  CHECK(cert.value == doctest::Approx(std::hypot(1.5, 2.0)));
}

TEST_CASE("free abelian sup norm needs an explicit opt-in") {
  Polynomial f(Family::FreeAbelian);
  f.add(Character::basis(Family::FreeAbelian, 0), 1.0);
  f.add(Character::basis(Family::FreeAbelian, 1), 1.0);
  CHECK_THROWS_AS(certified_sup_norm(f), UnsupportedCertification);
  SupOptions mc;
  mc.require_rigorous = false;
  const auto cert = certified_sup_norm(f, mc);
  CHECK(cert.upper == doctest::Approx(2.0));
  CHECK(cert.lower <= 2.0);
  CHECK(cert.lower > 1.9);
}

TEST_CASE("L^p norms") {
  for (double p : {1.0, 2.0, 3.0, 4.0, 7.5}) CHECK(lp_norm(poly({{3, 1.0}}), p).value == doctest::Approx(1.0));
  const auto f = poly({{1, 1.0}, {2, 1.0}});
  CHECK(std::pow(lp_norm(f, 4).value, 4) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(lp_norm(f, 4).exact);
  // |1 + e(t)| has mean 4/pi.
  const auto g = poly({{0, 1.0}, {1, 1.0}});
  CHECK(lp_norm(g, 1).value == doctest::Approx(4 / std::numbers::pi).epsilon(1e-8));
  CHECK(total_variation(g).value == doctest::Approx(4 / std::numbers::pi).epsilon(1e-9));
  CHECK_THROWS_AS(lp_norm(f, 0.5), DomainError);
}

TEST_CASE("Parseval") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial f(Family::Integer);
    double l2 = 0.0;
    for (int t = 0; t < 10; ++t)
      f.add(Character::integer(static_cast<long long>(rng.below(401)) - 200), Complex{rng.uniform(), -rng.uniform()});
    for (const auto& [c, v] : f.terms()) l2 += std::norm(v);
    CHECK(lp_norm(f, 2).value == doctest::Approx(std::sqrt(l2)).epsilon(1e-8));
  }
  const std::vector<Complex> a{1.0, 2.0, Complex{0, 1}};
  CHECK(lp_norm(rademacher(a), 2).value == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("dense grid evaluation agrees with direct summation") {
  Rng rng(21);
  Polynomial f(Family::Integer);
  for (int t = 0; t < 300; ++t)
    f.add(Character::integer(static_cast<long long>(rng.below(2001)) - 1000), Complex{rng.uniform(), rng.uniform()});
  std::vector<double> re, im;
  evaluate_grid(f, 4096, re, im);
  for (std::size_t i = 0; i < 4096; i += 97) {
    const Complex v = f.evaluate(GroupPoint::circle(static_cast<double>(i) / 4096));
    CHECK(std::abs(Complex{re[i], im[i]} - v) < 1e-9);
  }
}

TEST_CASE("Sidon lower bound") {
  CHECK(sidon_lower_bound(poly({{5, Complex{0, 3}}})) == doctest::Approx(1.0));
  const std::vector<Complex> a{Complex{0.5, 0.5}, Complex{0.5, -0.5}};
  CHECK(sidon_lower_bound(rademacher(a)) == doctest::Approx(std::sqrt(2.0)));
  const auto r16 = rademacher_extremal(16);
  CHECK(sidon_lower_bound(rademacher(r16.coefficients)) >= 1.55);
}

TEST_CASE("equal-arc extremals") {
  const auto r1 = rademacher_extremal(1);
  CHECK(r1.ratio == doctest::Approx(1.0));
  const auto r2 = rademacher_extremal(2);
  CHECK(r2.ratio == doctest::Approx(std::sqrt(2.0)));
  CHECK(sign_sum_sup(r2.coefficients) == doctest::Approx(1.0));
  CHECK(std::abs(r2.coefficients[0] - Complex{0.5, 0.5}) < 1e-15);
  CHECK(std::abs(r2.coefficients[1] - Complex{0.5, -0.5}) < 1e-15);
  for (int m : {3, 8, 16, 20}) {
    const auto r = rademacher_extremal(m);
    CHECK(r.raw_sup == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.ratio == doctest::Approx(m * std::sin(std::numbers::pi / (2 * m))).epsilon(1e-13));
    CHECK(r.ratio < std::numbers::pi / 2);
  }
  CHECK_THROWS_AS(rademacher_extremal(25), CapacityError);
}

TEST_CASE("subgaussian moments") {
  const std::vector<double> one{1.0};
  for (int q : {2, 4, 6}) {
    const auto r = subgaussian_check(one, q);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.ratio == doctest::Approx(1 / std::sqrt(q)));
  }
  const std::vector<double> two{1.0, 1.0};
  CHECK(subgaussian_check(two, 2).lhs == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> four{1.0, 1.0, 1.0, 1.0};
  const auto r4 = subgaussian_check(four, 4);
  CHECK(std::pow(r4.lhs, 4) == doctest::Approx(40.0));
  CHECK(r4.ratio == doctest::Approx(std::pow(40.0, 0.25) / 4).epsilon(1e-12));
  // Moment formula E S^4 = 3 (sum a^2)^2 - 2 sum a^4.
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(1 + rng.below(12));
    double s2 = 0, s4 = 0;
    for (double& x : a) x = rng.uniform() * 2 - 1, s2 += x * x, s4 += x * x * x * x;
    CHECK(std::pow(subgaussian_check(a, 4).lhs, 4) == doctest::Approx(3 * s2 * s2 - 2 * s4).epsilon(1e-12));
  }
  std::vector<double> many(30, 1.0);
  const auto mc = subgaussian_check(many, 2, 1, 1 << 16);
  CHECK_FALSE(mc.exact);
  CHECK(mc.lhs == doctest::Approx(std::sqrt(30.0)).epsilon(0.02));
}

TEST_CASE("Rudin ratio") {
  CHECK(rudin_ratio(poly({{4, 2.0}}), 4) == doctest::Approx(0.5));
  Polynomial f(Family::Integer);
  for (int j = 0; j < 8; ++j) f.add(Character::integer(1LL << j), 1.0);
  CHECK(rudin_ratio(f, 4) == doctest::Approx(std::pow(120.0, 0.25) / (2 * std::sqrt(8.0))));
  CHECK(rudin_ratio(f.scaled(Complex{0, -3}), 4) == doctest::Approx(rudin_ratio(f, 4)));
  std::vector<Character> set;
  for (int j = 0; j < 6; ++j) set.push_back(Character::integer(1LL << j));
  const auto scan = rudin_ratio_batch(set, 4, 16, 9);
  CHECK(scan.ratios.size() == 16);
  CHECK(scan.max_ratio <= 1.0);
  CHECK_THROWS_AS(rudin_ratio(f, 2), DomainError);
}

TEST_CASE("Steinhaus sandwich") {
  const std::vector<Character> one{Character::integer(3)};
  const std::vector<Complex> a1{2.0};
  const auto r1 = steinhaus_sandwich_mc(one, a1, 4, 1.0, 2000, 1);
  CHECK(r1.ratio == doctest::Approx(1.0));
  CHECK(r1.within);
  std::vector<Character> pow2;
  for (int j = 0; j < 6; ++j) pow2.push_back(Character::integer(1LL << j));
  const std::vector<Complex> ones(6, 1.0);
  const auto r2 = steinhaus_sandwich_mc(pow2, ones, 2, 2.0, 20000, 2);
  CHECK(r2.group_side == doctest::Approx(std::sqrt(6.0)));
  CHECK(std::abs(r2.steinhaus - std::sqrt(6.0)) <= 4 * r2.steinhaus_standard_error);
  const std::vector<Character> dense{Character::integer(1), Character::integer(2), Character::integer(3)};
  const std::vector<Complex> a3(3, 1.0);
  const auto r3 = steinhaus_sandwich_mc(dense, a3, 4, 2.0, 200000, 3);
  CHECK(r3.group_side > r3.steinhaus);
  CHECK(std::isfinite(r3.ratio));
}
