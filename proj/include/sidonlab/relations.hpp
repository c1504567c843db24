#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sidonlab/characters.hpp"

namespace sidonlab {

/// Default capacity (10^7), overridable through SIDONLAB_CAPACITY.
std::uint64_t default_capacity();

struct RelationOptions {
  /// Largest DP table / enumeration budget (states or words).
  std::uint64_t capacity = default_capacity();
};

/// A nontrivial relation prod lambda^eps = 1 over an ordered base set, with
/// eps in {-1,0,1}. Construction verifies the product is the identity.
/// In the Boolean family eps = -1 is normalised to +1.
class EpsilonRelation {
 public:
  EpsilonRelation(std::vector<Character> base, std::vector<int> eps);

  const std::vector<Character>& base() const noexcept { return base_; }
  const std::vector<int>& eps() const noexcept { return eps_; }
  int height() const noexcept { return height_; }
  std::vector<Character> support() const;
  EpsilonRelation negated() const;
  /// Sign flipped so that the first nonzero coefficient is +1.
  EpsilonRelation sign_normalized() const;

 private:
  std::vector<Character> base_;
  std::vector<int> eps_;
  int height_ = 0;
};

/// Word prod lambda^n over a base set; only nonzero exponents are stored.
struct SignedWord {
  Family family = Family::Integer;
  std::vector<Factor> terms;

  Int height() const;
  /// The group element the word evaluates to.
  Character value() const;
};

struct QiResult {
  bool qi = true;
  std::optional<EpsilonRelation> witness;
  std::string strategy;
};

/// Sorted copy of the set; throws DomainError on duplicates or mixed families.
std::vector<Character> canonical_set(std::span<const Character> set);

/// Decides quasi-independence with the strategy ladder: identity check,
/// superincreasing certificate (Z), naive 3^n (n <= 14), meet-in-the-middle
/// (n <= 28), signed-sum DP (Z), GF(2) elimination (Walsh). Anything else is
/// a CapacityError, never a guess.
QiResult is_quasi_independent(std::span<const Character> set, const RelationOptions& options = {});

/// All relations of height exactly d, both signs, in lexicographic order of
/// eps over the sorted base.
std::vector<EpsilonRelation> enumerate_relations(std::span<const Character> set, int d,
                                                 const RelationOptions& options = {});

/// Number of relations (both signs) with height > threshold.
std::uint64_t count_relations_height_gt(std::span<const Character> set, int threshold,
                                        const RelationOptions& options = {});

/// A relation of maximum height (<= cap when given); ties go to the
/// lexicographically smallest sign-normalised eps.
std::optional<EpsilonRelation> max_height_relation(std::span<const Character> set,
                                                   std::optional<int> cap = std::nullopt,
                                                   const RelationOptions& options = {});

/// Pseudo-polynomial decision for subsets of Z over reachable signed sums.
QiResult qi_decide_fast_z(std::span<const Character> set, const RelationOptions& options = {});

struct WordBlock {
  std::vector<Character> elements;
  Int cap = 0;
};

/// Representability of integers as products prod_k rho_k with rho_k a word
/// over block k of height at most cap_k. Built once, queried many times.
class WordReach {
 public:
  WordReach(std::span<const WordBlock> blocks, std::uint64_t capacity);

  /// Every representable value v satisfies |v| <= radius().
  Int radius() const noexcept { return radius_; }
  bool representable(Int v) const;
  /// One decomposition (a word per block) of v, if representable.
  std::optional<std::vector<SignedWord>> decompose(Int v) const;
  /// Minimal height of v as a word over block b, if at most the block cap.
  std::optional<Int> min_height(std::size_t block, Int v) const;
  std::size_t block_count() const noexcept { return blocks_.size(); }

 private:
  struct Step {
    Int height;
    std::int32_t element;  // index into the block, -1 for the empty word
    std::int8_t sign;
  };
  struct IntHash {
    std::size_t operator()(Int v) const noexcept;
  };
  struct BlockTable {
    std::vector<Int> elements;
    std::vector<Character> characters;
    std::unordered_map<Int, Step, IntHash> steps;
  };

  std::vector<BlockTable> blocks_;
  // combined_[k] = values representable with the first k blocks.
  std::vector<std::unordered_set<Int, IntHash>> combined_;
  Int radius_ = 0;
};

/// Words rho_k over the blocks with d(rho_k) <= cap_k and prod rho_k = target.
std::optional<std::vector<SignedWord>> constrained_word_search(std::span<const WordBlock> blocks,
                                                               const Character& target,
                                                               const RelationOptions& options = {});

/// 2^min(d,q) * binom(d+q, q), an upper bound on the number of words of
/// height at most d over q letters.
boost::multiprecision::cpp_int n_bound(std::uint64_t d, std::uint64_t q);

}  // namespace sidonlab
