#include "sidonlab/relations.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "sidonlab/errors.hpp"

namespace sidonlab {

std::uint64_t default_capacity() {
  static const std::uint64_t value = [] {
    if (const char* env = std::getenv("SIDONLAB_CAPACITY")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(10'000'000);
  }();
  return value;
}

// ---------------------------------------------------------------------------
// EpsilonRelation / SignedWord

EpsilonRelation::EpsilonRelation(std::vector<Character> base, std::vector<int> eps)
    : base_(std::move(base)), eps_(std::move(eps)) {
  if (base_.size() != eps_.size()) throw DomainError("relation: base and eps sizes differ");
  if (base_.empty()) throw DomainError("relation: empty base");
  const Family family = common_family(base_);
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < eps_.size(); ++i) {
    if (eps_[i] < -1 || eps_[i] > 1) throw DomainError("relation: eps outside {-1,0,1}");
    if (family == Family::Boolean && eps_[i] == -1) eps_[i] = 1;
    if (eps_[i] != 0) {
      ++height_;
      factors.push_back({base_[i], eps_[i]});
    }
  }
  if (height_ == 0) throw DomainError("relation: all coefficients are zero");
  if (!word_product(factors).is_identity())
    throw DomainError("relation: product is not the identity");
}

std::vector<Character> EpsilonRelation::support() const {
  std::vector<Character> out;
  for (std::size_t i = 0; i < eps_.size(); ++i)
    if (eps_[i] != 0) out.push_back(base_[i]);
  return out;
}

EpsilonRelation EpsilonRelation::negated() const {
  std::vector<int> e(eps_);
  for (int& x : e) x = -x;
  return EpsilonRelation(base_, std::move(e));
}

EpsilonRelation EpsilonRelation::sign_normalized() const {
  for (int x : eps_) {
    if (x > 0) return *this;
    if (x < 0) return negated();
  }
  return *this;
}

Int SignedWord::height() const {
  Int h = 0;
  for (const auto& t : terms) h = checked_add(h, abs_value(t.exponent));
  return h;
}

Character SignedWord::value() const {
  if (terms.empty()) return Character::identity(family);
  return word_product(terms);
}

std::vector<Character> canonical_set(std::span<const Character> set) {
  std::vector<Character> out(set.begin(), set.end());
  if (out.empty()) return out;
  common_family(out);
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw DomainError("set contains duplicate characters");
  return out;
}

// ---------------------------------------------------------------------------
// Search engine. A set of characters is mapped to columns of Z (scalar),
// Z^dim, or (Z/2)^dim; a relation is a nontrivial eps with sum eps_i col_i = 0.

namespace {

struct ScalarPolicy {
  using Value = Int;
  std::vector<Int> cols;

  Value zero() const { return 0; }
  void add(Value& v, std::size_t i, int e) const {
    v = e > 0 ? checked_add(v, cols[i]) : checked_sub(v, cols[i]);
  }
  bool is_zero(const Value& v) const { return v == 0; }
  Value negate(const Value& v) const { return checked_neg(v); }
  bool boolean() const { return false; }
};

struct VectorPolicy {
  using Value = std::vector<Int>;
  std::size_t dim = 0;
  bool mod2 = false;
  std::vector<std::vector<Int>> cols;

  Value zero() const { return Value(dim, 0); }
  void add(Value& v, std::size_t i, int e) const {
    const auto& c = cols[i];
    if (mod2) {
      for (std::size_t r = 0; r < dim; ++r) v[r] ^= c[r];
    } else {
      for (std::size_t r = 0; r < dim; ++r)
        v[r] = e > 0 ? checked_add(v[r], c[r]) : checked_sub(v[r], c[r]);
    }
  }
  bool is_zero(const Value& v) const {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
  }
  Value negate(const Value& v) const {
    if (mod2) return v;
    Value out(v);
    for (auto& x : out) x = checked_neg(x);
    return out;
  }
  bool boolean() const { return mod2; }
};

ScalarPolicy scalar_policy(std::span<const Character> set) {
  ScalarPolicy p;
  for (const auto& c : set) p.cols.push_back(c.value());
  return p;
}

VectorPolicy vector_policy(std::span<const Character> set, Family family) {
  VectorPolicy p;
  p.mod2 = family == Family::Boolean;
  std::vector<Coordinate> coords;
  for (const auto& c : set) {
    if (p.mod2) {
      coords.insert(coords.end(), c.indices().begin(), c.indices().end());
    } else {
      for (const auto& [j, n] : c.coords()) coords.push_back(j);
    }
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  p.dim = coords.size();
  auto row = [&](Coordinate j) {
    return static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), j) - coords.begin());
  };
  for (const auto& c : set) {
    std::vector<Int> col(p.dim, 0);
    if (p.mod2) {
      for (Coordinate j : c.indices()) col[row(j)] = 1;
    } else {
      for (const auto& [j, n] : c.coords()) col[row(j)] = n;
    }
    p.cols.push_back(std::move(col));
  }
  return p;
}

// Runs `fn(policy)` with the policy matching the family of the sorted set.
template <class Fn>
decltype(auto) with_policy(std::span<const Character> set, Family family, Fn&& fn) {
  if (family == Family::Integer) return fn(scalar_policy(set));
  return fn(vector_policy(set, family));
}

// Sign choices per position, in lexicographic order.
std::vector<int> sign_choices(bool boolean) {
  return boolean ? std::vector<int>{0, 1} : std::vector<int>{-1, 0, 1};
}

// Depth-first visit of every eps vector of height <= max_height (lexicographic
// order). `on_relation(eps, height)` fires on relations and returns false to stop.
template <class P, class F>
void naive_visit(const P& policy, std::size_t n, int max_height, F&& on_relation) {
  const std::vector<int> choices = sign_choices(policy.boolean());
  std::vector<int> eps(n, 0);
  typename P::Value value = policy.zero();
  bool stop = false;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int height) {
    if (stop) return;
    if (i == n) {
      if (height > 0 && policy.is_zero(value)) stop = !on_relation(eps, height);
      return;
    }
    for (int e : choices) {
      if (e != 0 && height + 1 > max_height) continue;
      eps[i] = e;
      if (e != 0) policy.add(value, i, e);
      rec(i + 1, height + (e != 0 ? 1 : 0));
      if (e != 0) policy.add(value, i, -e);
      eps[i] = 0;
      if (stop) return;
    }
  };
  rec(0, 0);
}

template <class Value>
struct HalfEntry {
  Value value;
  int height;
  std::uint32_t code;
};

template <class Value>
bool operator<(const HalfEntry<Value>& a, const HalfEntry<Value>& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.height != b.height) return a.height < b.height;
  return a.code < b.code;
}

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Enumerates every eps on positions [begin, end) and calls fn(value, height, code).
// code stores eps+1 (or eps for Boolean) in base `radix` digits, least significant first.
template <class P, class F>
void half_visit(const P& policy, std::size_t begin, std::size_t end, F&& fn) {
  const std::vector<int> choices = sign_choices(policy.boolean());
  const std::uint32_t radix = static_cast<std::uint32_t>(choices.size());
  typename P::Value value = policy.zero();
  std::function<void(std::size_t, int, std::uint32_t, std::uint32_t)> rec =
      [&](std::size_t i, int height, std::uint32_t code, std::uint32_t place) {
        if (i == end) {
          fn(value, height, code);
          return;
        }
        for (std::uint32_t d = 0; d < radix; ++d) {
          const int e = choices[d];
          if (e != 0) policy.add(value, i, e);
          rec(i + 1, height + (e != 0 ? 1 : 0), code + d * place, place * radix);
          if (e != 0) policy.add(value, i, -e);
        }
      };
  rec(begin, 0, 0, 1);
}

void decode(std::uint32_t code, bool boolean, std::size_t begin, std::size_t end, std::vector<int>& eps) {
  const std::uint32_t radix = boolean ? 2 : 3;
  for (std::size_t i = begin; i < end; ++i) {
    const int d = static_cast<int>(code % radix);
    code /= radix;
    eps[i] = boolean ? d : d - 1;
  }
}

constexpr std::size_t kNaiveLimit = 14;
constexpr std::size_t kMitmLimit = 28;

// Meet-in-the-middle over a sorted set: the right half is tabulated, the left
// half is streamed. `on_pair(left_value, left_height, left_code, range)` is
// called with the right entries whose value equals -left_value.
template <class P, class F>
void mitm_join(const P& policy, std::size_t n, std::uint64_t capacity, F&& on_pair) {
  const std::size_t split = (n + 1) / 2;
  const std::uint64_t right_size = ipow(policy.boolean() ? 2 : 3, n - split);
  if (right_size > std::max<std::uint64_t>(capacity, ipow(3, kMitmLimit / 2)))
    throw CapacityError("meet-in-the-middle table exceeds capacity");
  using Entry = HalfEntry<typename P::Value>;
  std::vector<Entry> right;
  right.reserve(right_size);
  half_visit(policy, split, n, [&](const auto& v, int h, std::uint32_t code) {
    right.push_back(Entry{v, h, code});
  });
  std::sort(right.begin(), right.end());
  half_visit(policy, 0, split, [&](const auto& v, int h, std::uint32_t code) {
    const auto target = policy.negate(v);
    auto lo = std::lower_bound(right.begin(), right.end(), target,
                               [](const Entry& e, const auto& t) { return e.value < t; });
    auto hi = lo;
    while (hi != right.end() && hi->value == target) ++hi;
    if (lo != hi) on_pair(h, code, std::span<const Entry>(&*lo, static_cast<std::size_t>(hi - lo)));
  });
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<int> normalized_signs(std::vector<int> eps) {
  for (int x : eps) {
    if (x > 0) break;
    if (x < 0) {
      for (int& y : eps) y = -y;
      break;
    }
  }
  return eps;
}

// Chooses between candidates: extreme height first, then lexicographically
// smallest sign-normalised eps.
struct Best {
  bool prefer_max = false;
  int height = -1;
  std::vector<int> eps;

  void offer(const std::vector<int>& candidate, int h) {
    if (height >= 0 && (prefer_max ? h < height : h > height)) return;
    std::vector<int> norm = normalized_signs(candidate);
    if (height < 0 || h != height || lex_less(norm, eps)) {
      height = h;
      eps = std::move(norm);
    }
  }
};

template <class P>
std::optional<std::vector<int>> min_relation_naive(const P& policy, std::size_t n) {
  Best best;
  naive_visit(policy, n, static_cast<int>(n), [&](const std::vector<int>& eps, int h) {
    best.offer(eps, h);
    return true;
  });
  if (best.height < 0) return std::nullopt;
  return best.eps;
}

template <class P>
std::optional<std::vector<int>> min_relation_mitm(const P& policy, std::size_t n, std::uint64_t capacity) {
  const std::size_t split = (n + 1) / 2;
  Best best;
  std::vector<int> eps(n, 0);
  mitm_join(policy, n, capacity, [&](int hl, std::uint32_t code, auto range) {
    for (const auto& r : range) {
      const int h = hl + r.height;
      if (h == 0) continue;
      if (best.height >= 0 && h > best.height) break;  // range sorted by height
      decode(code, policy.boolean(), 0, split, eps);
      decode(r.code, policy.boolean(), split, n, eps);
      best.offer(eps, h);
    }
  });
  if (best.height < 0) return std::nullopt;
  return best.eps;
}

bool superincreasing(std::span<const Character> sorted) {
  std::vector<Int> mags;
  for (const auto& c : sorted) mags.push_back(abs_value(c.value()));
  std::sort(mags.begin(), mags.end());
  Int prefix = 0;
  for (Int m : mags) {
    if (m <= prefix) return false;
    prefix = checked_add(prefix, m);
  }
  return true;
}

// GF(2) elimination over the Walsh index bits; returns a dependent subset.
std::optional<std::vector<int>> gf2_dependency(std::span<const Character> sorted) {
  const std::size_t n = sorted.size();
  std::vector<Coordinate> coords;
  for (const auto& c : sorted) coords.insert(coords.end(), c.indices().begin(), c.indices().end());
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  const std::size_t words = (coords.size() + 63) / 64;
  const std::size_t comb_words = (n + 63) / 64;
  struct Row {
    std::vector<std::uint64_t> bits;
    std::vector<std::uint64_t> comb;
  };
  std::vector<Row> basis;  // basis[k] has pivot pivots[k]
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < n; ++i) {
    Row row{std::vector<std::uint64_t>(words, 0), std::vector<std::uint64_t>(comb_words, 0)};
    for (Coordinate j : sorted[i].indices()) {
      const auto r = static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), j) - coords.begin());
      row.bits[r / 64] |= 1ULL << (r % 64);
    }
    row.comb[i / 64] |= 1ULL << (i % 64);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const std::size_t p = pivots[k];
      if (row.bits[p / 64] >> (p % 64) & 1ULL) {
        for (std::size_t w = 0; w < words; ++w) row.bits[w] ^= basis[k].bits[w];
        for (std::size_t w = 0; w < comb_words; ++w) row.comb[w] ^= basis[k].comb[w];
      }
    }
    std::size_t pivot = words * 64;
    for (std::size_t w = 0; w < words && pivot == words * 64; ++w)
      if (row.bits[w]) pivot = w * 64 + static_cast<std::size_t>(__builtin_ctzll(row.bits[w]));
    if (pivot == words * 64) {
      std::vector<int> eps(n, 0);
      for (std::size_t t = 0; t < n; ++t) eps[t] = (row.comb[t / 64] >> (t % 64)) & 1ULL ? 1 : 0;
      return eps;
    }
    // Keep the basis fully reduced on earlier pivots.
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].bits[pivot / 64] >> (pivot % 64) & 1ULL) {
        for (std::size_t w = 0; w < words; ++w) basis[k].bits[w] ^= row.bits[w];
        for (std::size_t w = 0; w < comb_words; ++w) basis[k].comb[w] ^= row.comb[w];
      }
    }
    basis.push_back(std::move(row));
    pivots.push_back(pivot);
  }
  return std::nullopt;
}

QiResult qi_result(std::vector<Character> base, std::optional<std::vector<int>> eps, std::string strategy) {
  QiResult r;
  r.strategy = std::move(strategy);
  if (eps) {
    r.qi = false;
    r.witness = EpsilonRelation(std::move(base), std::move(*eps)).sign_normalized();
  }
  return r;
}

std::optional<QiResult> identity_witness(const std::vector<Character>& sorted) {
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].is_identity()) {
      std::vector<int> eps(sorted.size(), 0);
      eps[i] = 1;
      return qi_result(sorted, std::move(eps), "identity");
    }
  }
  return std::nullopt;
}

double log_binom_bound(std::size_t n, int d) {
  // sum_{k<=d} binom(n,k) 2^k, as a double.
  double total = 0, term = 1;
  for (int k = 0; k <= d && static_cast<std::size_t>(k) <= n; ++k) {
    total += term;
    term = term * static_cast<double>(n - static_cast<std::size_t>(k)) / (k + 1) * 2.0;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------

QiResult qi_decide_fast_z(std::span<const Character> set, const RelationOptions& options) {
  std::vector<Character> sorted = canonical_set(set);
  if (sorted.empty()) return QiResult{true, std::nullopt, "dp"};
  require_family(sorted, Family::Integer);
  if (auto w = identity_witness(sorted)) return *w;

  const std::size_t n = sorted.size();
  Int total = 0;
  for (const auto& c : sorted) total = checked_add(total, abs_value(c.value()));
  const Int width = checked_add(checked_mul(total, 2), 1);
  if (width > static_cast<Int>(options.capacity))
    throw CapacityError("signed-sum DP table (" + to_string(width) + " states) exceeds capacity");

  const auto offset = static_cast<std::int64_t>(total);
  const auto w = static_cast<std::size_t>(width);
  // first[v + offset] = index of the element whose step first reached v
  // (-1 for the empty sum, -2 for unreachable).
  std::vector<std::int32_t> first(w, -2);
  first[static_cast<std::size_t>(offset)] = -1;
  std::int64_t span_now = 0;  // reachable values lie in [-span_now, span_now]

  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::int64_t>(abs_value(sorted[i].value()));
    if (first[static_cast<std::size_t>(offset + a)] != -2) {
      // |lambda_i| is already a signed sum of earlier elements.
      std::vector<int> eps(n, 0);
      eps[i] = -1;
      std::int64_t v = a;
      while (v != 0) {
        const std::int32_t t = first[static_cast<std::size_t>(offset + v)];
        const auto at = static_cast<std::int64_t>(abs_value(sorted[static_cast<std::size_t>(t)].value()));
        const std::int64_t prev_plus = v - at;  // v = prev + a_t
        int e;
        if (prev_plus >= -total && prev_plus <= total &&
            first[static_cast<std::size_t>(offset + prev_plus)] != -2 &&
            first[static_cast<std::size_t>(offset + prev_plus)] < t) {
          e = 1;
          v = prev_plus;
        } else {
          e = -1;
          v = v + at;
        }
        eps[static_cast<std::size_t>(t)] = e;
      }
      // eps currently describes sum_t eps_t |lambda_t| = 0; map to lambda signs.
      for (std::size_t t = 0; t < n; ++t)
        if (sorted[t].value() < 0) eps[t] = -eps[t];
      return qi_result(sorted, std::move(eps), "dp");
    }
    for (std::int64_t v = -span_now; v <= span_now; ++v) {
      const std::int32_t f = first[static_cast<std::size_t>(offset + v)];
      if (f == -2 || f >= static_cast<std::int32_t>(i)) continue;
      for (std::int64_t nv : {v + a, v - a}) {
        auto& slot = first[static_cast<std::size_t>(offset + nv)];
        if (slot == -2) slot = static_cast<std::int32_t>(i);
      }
    }
    span_now += a;
  }
  return QiResult{true, std::nullopt, "dp"};
}

QiResult is_quasi_independent(std::span<const Character> set, const RelationOptions& options) {
  std::vector<Character> sorted = canonical_set(set);
  if (sorted.empty()) return QiResult{true, std::nullopt, "empty"};
  if (auto w = identity_witness(sorted)) return *w;
  const Family family = sorted.front().family();
  const std::size_t n = sorted.size();

  if (family == Family::Integer && superincreasing(sorted))
    return QiResult{true, std::nullopt, "superincreasing"};
  if (n <= kNaiveLimit) {
    auto eps = with_policy(sorted, family, [&](const auto& p) { return min_relation_naive(p, n); });
    return qi_result(sorted, std::move(eps), "naive");
  }
  if (n <= kMitmLimit) {
    auto eps = with_policy(sorted, family,
                           [&](const auto& p) { return min_relation_mitm(p, n, options.capacity); });
    return qi_result(sorted, std::move(eps), "meet-in-the-middle");
  }
  if (family == Family::Integer) return qi_decide_fast_z(sorted, options);
  if (family == Family::Boolean) return qi_result(sorted, gf2_dependency(sorted), "gf2");
  throw CapacityError("set of size " + std::to_string(n) + " is beyond exact qi capacity for this family");
}

std::vector<EpsilonRelation> enumerate_relations(std::span<const Character> set, int d,
                                                 const RelationOptions& options) {
  if (d < 1) throw DomainError("enumerate_relations: height must be >= 1");
  std::vector<Character> sorted = canonical_set(set);
  std::vector<EpsilonRelation> out;
  if (sorted.empty()) return out;
  const std::size_t n = sorted.size();
  if (n > kNaiveLimit && log_binom_bound(n, d) > static_cast<double>(options.capacity))
    throw CapacityError("relation enumeration exceeds capacity");
  with_policy(sorted, sorted.front().family(), [&](const auto& p) {
    naive_visit(p, n, d, [&](const std::vector<int>& eps, int h) {
      if (h == d) out.emplace_back(sorted, eps);
      return true;
    });
    return 0;
  });
  return out;
}

std::uint64_t count_relations_height_gt(std::span<const Character> set, int threshold,
                                        const RelationOptions& options) {
  std::vector<Character> sorted = canonical_set(set);
  if (sorted.empty()) return 0;
  const std::size_t n = sorted.size();
  const Family family = sorted.front().family();
  if (threshold >= static_cast<int>(n)) return 0;

  if (n <= kNaiveLimit) {
    std::uint64_t count = 0;
    with_policy(sorted, family, [&](const auto& p) {
      naive_visit(p, n, static_cast<int>(n), [&](const std::vector<int>&, int h) {
        if (h > threshold) ++count;
        return true;
      });
      return 0;
    });
    return count;
  }
  if (n <= kMitmLimit) {
    std::uint64_t count = 0;
    with_policy(sorted, family, [&](const auto& p) {
      mitm_join(p, n, options.capacity, [&](int hl, std::uint32_t, auto range) {
        // range is sorted by height; count heights > threshold - hl.
        for (const auto& r : range)
          if (hl + r.height > threshold && hl + r.height > 0) ++count;
      });
      return 0;
    });
    return count;
  }
  if (family != Family::Integer)
    throw CapacityError("relation counting beyond exact capacity for this family");

  // DP over (height, signed sum) for Z.
  Int total = 0;
  for (const auto& c : sorted) total = checked_add(total, abs_value(c.value()));
  const Int width = checked_add(checked_mul(total, 2), 1);
  if (checked_mul(width, static_cast<Int>(n + 1)) > static_cast<Int>(options.capacity))
    throw CapacityError("relation-count DP exceeds capacity");
  const auto w = static_cast<std::size_t>(width);
  const auto offset = static_cast<std::size_t>(total);
  std::vector<std::vector<std::uint64_t>> cnt(n + 1, std::vector<std::uint64_t>(w, 0));
  cnt[0][offset] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(abs_value(sorted[i].value()));
    for (std::size_t h = i + 1; h-- > 0;) {
      for (std::size_t s = 0; s < w; ++s) {
        const std::uint64_t c = cnt[h][s];
        if (!c) continue;
        for (std::size_t t : {s + a, s - a}) {
          if (t >= w) continue;  // s - a wraps to a huge value when negative
          if (__builtin_add_overflow(cnt[h + 1][t], c, &cnt[h + 1][t]))
            throw OverflowError("relation count overflows 64 bits");
        }
      }
    }
  }
  std::uint64_t count = 0;
  for (std::size_t h = static_cast<std::size_t>(std::max(threshold + 1, 1)); h <= n; ++h)
    count += cnt[h][offset];
  return count;
}

std::optional<EpsilonRelation> max_height_relation(std::span<const Character> set, std::optional<int> cap,
                                                   const RelationOptions& options) {
  std::vector<Character> sorted = canonical_set(set);
  if (sorted.empty()) return std::nullopt;
  const std::size_t n = sorted.size();
  const int limit = cap ? std::min(*cap, static_cast<int>(n)) : static_cast<int>(n);
  if (limit < 1) return std::nullopt;
  const Family family = sorted.front().family();

  Best best;
  best.prefer_max = true;
  if (n <= kNaiveLimit) {
    with_policy(sorted, family, [&](const auto& p) {
      naive_visit(p, n, limit, [&](const std::vector<int>& eps, int h) {
        best.offer(eps, h);
        return true;
      });
      return 0;
    });
  } else if (n <= kMitmLimit) {
    const std::size_t split = (n + 1) / 2;
    std::vector<int> eps(n, 0);
    with_policy(sorted, family, [&](const auto& p) {
      mitm_join(p, n, options.capacity, [&](int hl, std::uint32_t code, auto range) {
        for (const auto& r : range) {
          const int h = hl + r.height;
          if (h == 0 || h > limit || h < best.height) continue;
          decode(code, p.boolean(), 0, split, eps);
          decode(r.code, p.boolean(), split, n, eps);
          best.offer(eps, h);
        }
      });
      return 0;
    });
  } else {
    throw CapacityError("max_height_relation: set of size " + std::to_string(n) + " exceeds exact capacity");
  }
  if (best.height < 0) return std::nullopt;
  return EpsilonRelation(sorted, best.eps);
}

boost::multiprecision::cpp_int n_bound(std::uint64_t d, std::uint64_t q) {
  using boost::multiprecision::cpp_int;
  cpp_int binom = 1;
  // binom(d+q, q) = prod_{i=1..q} (d+i)/i, exact at every step.
  for (std::uint64_t i = 1; i <= q; ++i) {
    binom *= (d + i);
    binom /= i;
  }
  cpp_int pow2 = 1;
  pow2 <<= static_cast<unsigned>(std::min(d, q));
  return pow2 * binom;
}

}  // namespace sidonlab
