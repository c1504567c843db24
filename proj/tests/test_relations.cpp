#include <algorithm>

#include "doctest.h"
#include "sidonlab/errors.hpp"
#include "sidonlab/relations.hpp"
#include "sidonlab/rng.hpp"

using namespace sidonlab;

namespace {

std::vector<Character> Z(std::initializer_list<long long> v) {
  std::vector<Character> out;
  for (long long x : v) out.push_back(Character::integer(x));
  return out;
}

// Brute force: every eps in {-1,0,1}^n with sum eps x = 0.
std::vector<std::vector<int>> all_relations(const std::vector<long long>& x) {
  std::vector<std::vector<int>> out;
  std::vector<int> eps(x.size(), -1);
  for (;;) {
    long long s = 0;
    bool nz = false;
    for (std::size_t i = 0; i < x.size(); ++i) s += eps[i] * x[i], nz |= eps[i] != 0;
    if (nz && s == 0) out.push_back(eps);
    std::size_t i = 0;
    while (i < x.size() && eps[i] == 1) eps[i++] = -1;
    if (i == x.size()) return out;
    ++eps[i];
  }
}

int height(const std::vector<int>& e) {
  int h = 0;
  for (int v : e) h += v != 0;
  return h;
}

}  // namespace

TEST_CASE("quasi-independence examples") {
  CHECK(is_quasi_independent(Z({1, 2, 4})).qi);
  const QiResult r = is_quasi_independent(Z({1, 2, 3}));
  REQUIRE_FALSE(r.qi);
  REQUIRE(r.witness);
  CHECK(r.witness->height() == 3);
  CHECK(r.witness->sign_normalized().eps() == std::vector<int>{1, 1, -1});
  CHECK(is_quasi_independent(std::vector<Character>{}).qi);
  CHECK_FALSE(is_quasi_independent(Z({0, 5})).qi);
}

TEST_CASE("relation enumeration and counting") {
  const auto rels = enumerate_relations(Z({1, 2, 3}), 3);
  REQUIRE(rels.size() == 2);
  CHECK(rels[0].eps() == std::vector<int>{-1, -1, 1});
  CHECK(rels[1].eps() == std::vector<int>{1, 1, -1});
  CHECK(enumerate_relations(Z({1, 2, 3}), 2).empty());
  CHECK(enumerate_relations(Z({1, 2, 4, 8}), 3).empty());
  CHECK(count_relations_height_gt(Z({1, 2, 3}), 3) == 0);
  CHECK(count_relations_height_gt(Z({1, 2, 3}), 2) == 2);
  CHECK(count_relations_height_gt(Z({1, 2, 4, 8, 16}), 0) == 0);
}

TEST_CASE("maximal relations") {
  const auto r = max_height_relation(Z({1, 2, 3}));
  REQUIRE(r);
  CHECK(r->height() == 3);
  CHECK_FALSE(max_height_relation(Z({1, 2, 4, 8})));
  const auto r4 = max_height_relation(Z({1, 2, 3, 6}));
  REQUIRE(r4);
  CHECK(r4->height() == 4);
  CHECK(r4->eps() == std::vector<int>{1, 1, 1, -1});
  const auto capped = max_height_relation(Z({1, 2, 3, 6}), 3);
  REQUIRE(capped);
  CHECK(capped->height() == 3);
}

TEST_CASE("fast decision on the integers") {
  std::vector<Character> pow2;
  for (int j = 0; j < 20; ++j) pow2.push_back(Character::integer(Int{1} << j));
  CHECK(qi_decide_fast_z(pow2).qi);
  std::vector<Character> hundred;
  for (int j = 1; j <= 100; ++j) hundred.push_back(Character::integer(j));
  const QiResult r = qi_decide_fast_z(hundred);
  REQUIRE_FALSE(r.qi);
  Int s = 0;
  for (std::size_t i = 0; i < r.witness->base().size(); ++i) s += r.witness->eps()[i] * r.witness->base()[i].value();
  CHECK(s == 0);
}

TEST_CASE("strategies agree with brute force on random sets") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<long long> x;
    while (x.size() < n) {
      const long long v = 1 + static_cast<long long>(rng.below(60));
      if (std::find(x.begin(), x.end(), v) == x.end()) x.push_back(v);
    }
    std::sort(x.begin(), x.end());
    std::vector<Character> set;
    for (long long v : x) set.push_back(Character::integer(v));
    const auto brute = all_relations(x);
    CHECK(is_quasi_independent(set).qi == brute.empty());
    CHECK(qi_decide_fast_z(set).qi == brute.empty());
    for (int t = 0; t <= static_cast<int>(n); ++t) {
      const auto c = static_cast<std::uint64_t>(
          std::count_if(brute.begin(), brute.end(), [&](const auto& e) { return height(e) > t; }));
      CHECK(count_relations_height_gt(set, t) == c);
    }
    int best = 0;
    for (const auto& e : brute) best = std::max(best, height(e));
    const auto m = max_height_relation(set);
    CHECK((m ? m->height() : 0) == best);
  }
}

TEST_CASE("meet in the middle and DP rungs") {
  // 20 elements: beyond the naive rung.
  std::vector<Character> set;
  for (int j = 0; j < 20; ++j) set.push_back(Character::integer(1000 + 37 * j * j));
  const QiResult r = is_quasi_independent(set);
  CHECK(r.strategy != "naive");
  CHECK(r.qi == qi_decide_fast_z(set).qi);
}

TEST_CASE("Boolean and free abelian relations") {
  const std::vector<Character> walsh{Character::walsh({0}), Character::walsh({1}), Character::walsh({0, 1})};
  const QiResult r = is_quasi_independent(walsh);
  REQUIRE_FALSE(r.qi);
  for (int e : r.witness->eps()) CHECK(e >= 0);
  CHECK(is_quasi_independent(std::vector<Character>{Character::walsh({0}), Character::walsh({1})}).qi);
  const std::vector<Character> fa{Character::free_abelian({{0, 1}}), Character::free_abelian({{1, 1}}),
                                  Character::free_abelian({{0, 1}, {1, 1}})};
  CHECK_FALSE(is_quasi_independent(fa).qi);
}

TEST_CASE("relations must be valid") {
  CHECK_THROWS_AS(EpsilonRelation(Z({1, 2, 4}), {1, 1, -1}), DomainError);
  CHECK_THROWS_AS(canonical_set(Z({3, 3})), DomainError);
}

TEST_CASE("constrained word search") {
  const std::vector<WordBlock> one{{Z({5}), 2}};
  const auto w = constrained_word_search(one, Character::integer(10));
  REQUIRE(w);
  CHECK((*w)[0].height() == 2);
  const std::vector<WordBlock> tight{{Z({5}), 1}};
  CHECK_FALSE(constrained_word_search(tight, Character::integer(10)));
  const std::vector<WordBlock> two{{Z({3, 5}), 2}, {Z({7}), 1}};
  const auto w2 = constrained_word_search(two, Character::integer(15));
  REQUIRE(w2);
  CHECK((*w2)[0].height() <= 2);
  CHECK((*w2)[1].height() <= 1);
  CHECK((*w2)[0].value().value() + (*w2)[1].value().value() == 15);
}

TEST_CASE("word reach agrees with enumeration") {
  const std::vector<WordBlock> blocks{{Z({3, 7}), 3}, {Z({10}), 2}};
  const WordReach reach(blocks, 1'000'000);
  CHECK(reach.radius() == 3 * 7 + 2 * 10);
  // Enumerate all words by exponents.
  std::vector<bool> hit(2 * 41 + 1, false);
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -2; c <= 2; ++c)
        if (std::abs(a) + std::abs(b) <= 3) hit[static_cast<std::size_t>(3 * a + 7 * b + 10 * c + 41)] = true;
  for (int v = -41; v <= 41; ++v) {
    CHECK(reach.representable(v) == hit[static_cast<std::size_t>(v + 41)]);
    if (const auto d = reach.decompose(v)) {
      CHECK((*d)[0].height() <= 3);
      CHECK((*d)[1].height() <= 2);
      Int s = 0;
      for (const auto& word : *d)
        for (const auto& f : word.terms) s += f.exponent * f.character.value();
      CHECK(s == v);
    }
  }
  CHECK(reach.min_height(0, 10) == Int{2});
  CHECK(reach.min_height(0, 11) == Int{3});  // 7 + 7 - 3
  CHECK_FALSE(reach.min_height(0, 15));      // needs five letters
}

TEST_CASE("word-count bound") {
  CHECK(n_bound(1, 1) == 4);
  CHECK(n_bound(0, 5) == 1);
  CHECK(n_bound(2, 1) == 6);
  // Bound dominates the exact count on small cases.
  for (int d = 0; d <= 4; ++d)
    for (int q = 1; q <= 3; ++q) {
      long long exact = 0;
      std::vector<int> e(static_cast<std::size_t>(q), -d);
      for (;;) {
        int h = 0;
        for (int v : e) h += std::abs(v);
        exact += h <= d;
        std::size_t i = 0;
        while (i < e.size() && e[i] == d) e[i++] = -d;
        if (i == e.size()) break;
        ++e[i];
      }
      CHECK(n_bound(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(q)) >= exact);
    }
}

TEST_CASE("capacity errors are raised, not guessed") {
  std::vector<Character> set;
  for (int j = 1; j <= 40; ++j) set.push_back(Character::free_abelian({{static_cast<Coordinate>(j), 1}, {0, j}}));
  RelationOptions small;
  small.capacity = 1000;
  CHECK_THROWS_AS(is_quasi_independent(set, small), CapacityError);
}
