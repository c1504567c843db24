#include <cmath>

#include "doctest.h"
#include "sidonlab/characters.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/integer.hpp"

using namespace sidonlab;

TEST_CASE("word product in the integers") {
  const std::vector<Factor> f{{Character::integer(3), 1}, {Character::integer(5), 1}};
  CHECK(word_product(f) == Character::integer(8));
  const Character g = Character::integer(42);
  const std::vector<Factor> inv{{g, 1}, {g, -1}};
  CHECK(word_product(inv).is_identity());
  const std::vector<Factor> scaled{{Character::integer(5), 2}, {Character::integer(-3), 3}};
  CHECK(word_product(scaled) == Character::integer(1));
}

TEST_CASE("Rademacher generators have order two") {
  const Character r1 = Character::basis(Family::Boolean, 1);
  const std::vector<Factor> sq{{r1, 1}, {r1, 1}};
  CHECK(word_product(sq).is_identity());
  CHECK(has_order_two(r1));
  CHECK(has_order_two(Character::walsh({0, 3})));
  CHECK_FALSE(has_order_two(Character::integer(4)));
  CHECK_FALSE(has_order_two(Character::basis(Family::FreeAbelian, 2)));
  CHECK_THROWS_AS(has_order_two(Character::identity(Family::Integer)), DomainError);
}

TEST_CASE("identity detection") {
  CHECK(Character::integer(0).is_identity());
  CHECK_FALSE(Character::integer(7).is_identity());
  CHECK(Character::walsh({}).is_identity());
  CHECK(Character::walsh({2, 2}).is_identity());
  CHECK(Character::free_abelian({{1, 2}, {1, -2}}).is_identity());
}

TEST_CASE("payloads are normalised") {
  const Character a = Character::free_abelian({{3, 1}, {1, 2}, {3, 1}, {5, 0}});
  const Character b = Character::free_abelian({{1, 2}, {3, 2}});
  CHECK(a == b);
  CHECK(a.coords().size() == 2);
  CHECK(Character::walsh({4, 1, 4, 2}) == Character::walsh({2, 1}));
  CHECK(Character::integer(3) != Character::walsh({3}));
  CHECK(Character::integer(-5).inverse() == Character::integer(5));
}

TEST_CASE("evaluation") {
  const auto v = evaluate(Character::integer(1), GroupPoint::circle(0.25));
  CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.imag() == doctest::Approx(1.0));
  const auto one = evaluate(Character::identity(Family::Integer), GroupPoint::circle(0.123));
  CHECK(one.real() == doctest::Approx(1.0));
  const auto w = evaluate(Character::walsh({0, 1}), GroupPoint::cantor({0}));
  CHECK(w.real() == doctest::Approx(-1.0));
  const auto t = evaluate(Character::free_abelian({{0, 1}, {2, -1}}), GroupPoint::torus({{0, 0.5}, {2, 0.25}}));
  // exp(2 pi i (0.5 - 0.25)) = i
  CHECK(t.imag() == doctest::Approx(1.0));
  CHECK(std::abs(t) == doctest::Approx(1.0));
}

TEST_CASE("families must not mix") {
  const std::vector<Factor> mixed{{Character::integer(1), 1}, {Character::walsh({1}), 1}};
  CHECK_THROWS_AS(word_product(mixed), DomainError);
  const std::vector<Character> set{Character::integer(1), Character::walsh({1})};
  CHECK_THROWS_AS(common_family(set), DomainError);
}

TEST_CASE("checked 128-bit arithmetic") {
  const Int big = Int{1} << 126;
  CHECK_THROWS_AS(checked_add(big, big), OverflowError);
  CHECK_THROWS_AS(checked_mul(big, 4), OverflowError);
  CHECK(to_string(parse_int("-170141183460469231731687303715884105727")) ==
        "-170141183460469231731687303715884105727");
  CHECK_THROWS_AS(parse_int("12a"), DomainError);
  CHECK(fits_int64(Int{1} << 62));
  CHECK_FALSE(fits_int64(Int{1} << 63));
}
