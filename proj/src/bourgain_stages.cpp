#include <algorithm>
#include <cmath>

#include "sidonlab/bourgain.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/json_io.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab {

namespace {

int stage2_threshold(std::size_t block_size) { return static_cast<int>(block_size / 10) + 1; }

std::vector<Int> integer_values(std::span<const Character> set) {
  std::vector<Int> v;
  v.reserve(set.size());
  for (const auto& c : set) v.push_back(c.value());
  return v;
}

std::uint64_t pow3(std::size_t n, std::uint64_t capacity, const char* what) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    r *= 3;
    if (r > capacity) throw CapacityError(std::string(what) + ": 3^" + std::to_string(n) + " words exceed capacity");
  }
  return r;
}

// Words over the other blocks, caps floor(|Lambda_j|^2 / |Lambda_k|).
std::vector<WordBlock> stage2_blocks(std::size_t index, const std::vector<Block>& blocks, std::vector<Int>& caps) {
  const Int nj = static_cast<Int>(blocks[index].elements.size());
  std::vector<WordBlock> out;
  caps.clear();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (k == index) continue;
    const Int cap = checked_mul(nj, nj) / static_cast<Int>(blocks[k].elements.size());
    caps.push_back(cap);
    out.push_back(WordBlock{blocks[k].elements, cap});
  }
  return out;
}

struct HalfWord {
  Int value;
  int height;
};

std::vector<HalfWord> half_words(std::span<const Int> x) {
  std::vector<HalfWord> out{{0, 0}};
  for (Int v : x) {
    const std::size_t m = out.size();
    out.reserve(3 * m);
    for (std::size_t i = 0; i < m; ++i) {
      out.push_back({checked_add(out[i].value, v), out[i].height + 1});
      out.push_back({checked_sub(out[i].value, v), out[i].height + 1});
    }
  }
  return out;
}

std::uint64_t count_mitm(std::span<const Int> a, int threshold, const WordReach& reach) {
  const std::size_t half = a.size() / 2;
  std::vector<HalfWord> left = half_words(a.first(half));
  std::vector<HalfWord> right = half_words(a.subspan(half));
  std::sort(right.begin(), right.end(), [](const HalfWord& p, const HalfWord& q) { return p.value < q.value; });
  const Int r = reach.radius();
  std::uint64_t count = 0;
  for (const HalfWord& l : left) {
    // vL + vR must lie in [-r, r].
    const Int lo = checked_sub(checked_neg(r), l.value), hi = checked_sub(r, l.value);
    auto it = std::lower_bound(right.begin(), right.end(), lo,
                               [](const HalfWord& p, Int v) { return p.value < v; });
    for (; it != right.end() && it->value <= hi; ++it) {
      if (l.height + it->height < threshold) continue;
      if (reach.representable(checked_neg(checked_add(l.value, it->value)))) ++count;
    }
  }
  return count;
}

// Depth-first over eps in descending |lambda| order. Stops at the first hit
// when `first` is set.
struct Recount {
  std::vector<Int> x;
  std::vector<std::size_t> order;  // position in x for each depth
  std::vector<Int> tail;           // sum of |x| over depths >= i
  int threshold = 0;
  const WordReach* reach = nullptr;
  std::vector<int> eps;
  std::uint64_t count = 0;
  bool stop_at_first = false;
  std::optional<std::vector<int>> first;

  Recount(std::span<const Int> values, int thr, const WordReach& r, bool stop)
      : x(values.begin(), values.end()), threshold(thr), reach(&r), eps(values.size(), 0), stop_at_first(stop) {
    order.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return abs_value(x[p]) > abs_value(x[q]); });
    tail.assign(x.size() + 1, 0);
    for (std::size_t i = x.size(); i-- > 0;) tail[i] = checked_add(tail[i + 1], abs_value(x[order[i]]));
  }

  bool visit(std::size_t depth, Int s, int height) {
    if (abs_value(s) > checked_add(reach->radius(), tail[depth])) return false;
    if (height + static_cast<int>(x.size() - depth) < threshold) return false;
    if (depth == x.size()) {
      if (reach->representable(checked_neg(s))) {
        ++count;
        if (stop_at_first) {
          first = eps;
          return true;
        }
      }
      return false;
    }
    const std::size_t i = order[depth];
    for (int e : {-1, 0, 1}) {
      eps[i] = e;
      const Int next = e == 0 ? s : (e > 0 ? checked_add(s, x[i]) : checked_sub(s, x[i]));
      if (visit(depth + 1, next, height + (e != 0))) return true;
    }
    eps[i] = 0;
    return false;
  }
};

Int eps_value(std::span<const Int> x, std::span<const int> eps) {
  Int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (eps[i] != 0) s = eps[i] > 0 ? checked_add(s, x[i]) : checked_sub(s, x[i]);
  return s;
}

Json eps_json(std::span<const Character> set, std::span<const int> eps) {
  Json out = Json::object();
  for (std::size_t i = 0; i < set.size(); ++i)
    if (eps[i] != 0) out[set[i].key()] = eps[i];
  return out;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> stage2_forbidden(std::span<const Character> A, std::size_t index,
                                                          const std::vector<Block>& blocks,
                                                          const RelationOptions& options) {
  if (index >= blocks.size()) throw DomainError("stage2_forbidden: block index out of range");
  require_family(A, Family::Integer);
  std::vector<Int> caps;
  const std::vector<WordBlock> others = stage2_blocks(index, blocks, caps);
  const WordReach reach(others, options.capacity);
  const std::vector<Int> x = integer_values(canonical_set(A));
  pow3((x.size() + 1) / 2, options.capacity, "stage2_forbidden");
  const int threshold = stage2_threshold(blocks[index].elements.size());
  const std::uint64_t mitm = count_mitm(x, threshold, reach);
  Recount dfs(x, threshold, reach, false);
  dfs.visit(0, 0, 0);
  return {mitm, dfs.count};
}

Stage2Result stage2_select(std::size_t index, const std::vector<Block>& blocks, std::uint64_t seed,
                           const ExtractParams& params) {
  if (index >= blocks.size()) throw DomainError("stage2_select: block index out of range");
  const Block& block = blocks[index];
  require_family(block.elements, Family::Integer);
  Stage2Result out;
  out.index = block.index;
  const std::size_t nj = block.elements.size();
  out.height_threshold = stage2_threshold(nj);
  const std::vector<WordBlock> others = stage2_blocks(index, blocks, out.caps);
  const WordReach reach(others, params.relations.capacity);

  Rng rng(seed);
  Json example;
  for (int attempt = 1; attempt <= params.max_attempts; ++attempt) {
    std::vector<Character> A;
    for (const auto& c : block.elements)
      if (rng.bernoulli(0.25)) A.push_back(c);
    if (!(5 * A.size() > nj)) {
      out.rejections.push_back("size " + std::to_string(A.size()));
      continue;
    }
    const std::vector<Int> x = integer_values(A);
    pow3((x.size() + 1) / 2, params.relations.capacity, "stage2_select");
    const std::uint64_t mitm = count_mitm(x, out.height_threshold, reach);
    if (mitm != 0) {
      out.rejections.push_back("forbidden " + std::to_string(mitm));
      Recount probe(x, out.height_threshold, reach, true);
      probe.visit(0, 0, 0);
      if (probe.first) {
        example = Json::object();
        example["sigma"] = eps_json(A, *probe.first);
        Json rho = Json::array();
        if (auto words = reach.decompose(checked_neg(eps_value(x, *probe.first))))
          for (const auto& w : *words) rho.push_back(word_to_json(w));
        example["rho"] = std::move(rho);
      }
      continue;
    }
    Recount dfs(x, out.height_threshold, reach, false);
    dfs.visit(0, 0, 0);
    out.A = std::move(A);
    out.attempts = attempt;
    out.forbidden_mitm = mitm;
    out.forbidden_recount = dfs.count;
    return out;
  }
  Json diag;
  diag["block"] = block.index;
  diag["block_size"] = nj;
  diag["height_threshold"] = out.height_threshold;
  Json caps = Json::array();
  for (Int c : out.caps) caps.push_back(int_to_json(c));
  diag["caps"] = std::move(caps);
  diag["max_attempts"] = params.max_attempts;
  diag["rejections"] = out.rejections;
  if (!example.is_null()) diag["violation"] = std::move(example);
  throw ExtractionFailure("stage2_select: no acceptable selection for block " + std::to_string(block.index) +
                              " in " + std::to_string(params.max_attempts) + " attempts",
                          diag.dump());
}

std::vector<Stage3Result> stage3_prune(const std::vector<std::vector<Character>>& A,
                                       const std::vector<Block>& blocks, const RelationOptions& options) {
  if (A.size() != blocks.size()) throw DomainError("stage3_prune: one selection per block is required");
  std::vector<Stage3Result> out;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    Stage3Result res;
    res.index = blocks[j].index;
    const std::vector<Character> aj = canonical_set(A[j]);
    require_family(aj, Family::Integer);
    const std::vector<Int> x = integer_values(aj);
    const Int nj = static_cast<Int>(blocks[j].elements.size());
    const int top = std::min<int>(static_cast<int>(blocks[j].elements.size() / 10), static_cast<int>(aj.size()));

    for (int h = top; h >= 1 && res.sigma.empty(); --h) {
      std::vector<WordBlock> others;
      for (std::size_t k = 0; k < blocks.size(); ++k)
        if (k != j)
          others.push_back(WordBlock{blocks[k].elements,
                                     checked_mul(h, nj) / static_cast<Int>(blocks[k].elements.size())});
      const WordReach reach(others, options.capacity);
      std::vector<Int> tail(x.size() + 1, 0);
      for (std::size_t i = x.size(); i-- > 0;) tail[i] = checked_add(tail[i + 1], abs_value(x[i]));

      // Lexicographic order with -1 < 0 < 1; leading entry restricted to {0, +1}.
      std::vector<int> eps(x.size(), 0);
      bool found = false;
      auto dfs = [&](auto&& self, std::size_t i, Int s, int height, bool started) -> void {
        if (found) return;
        const int left = h - height;
        if (left < 0 || left > static_cast<int>(x.size() - i)) return;
        if (abs_value(s) > checked_add(reach.radius(), tail[i])) return;
        if (i == x.size()) {
          if (reach.representable(checked_neg(s))) found = true;
          return;
        }
        for (int e : {-1, 0, 1}) {
          if (!started && e < 0) continue;
          eps[i] = e;
          const Int next = e == 0 ? s : (e > 0 ? checked_add(s, x[i]) : checked_sub(s, x[i]));
          self(self, i + 1, next, height + (e != 0), started || e != 0);
          if (found) return;
        }
        eps[i] = 0;
      };
      dfs(dfs, 0, 0, 0, false);
      if (!found) continue;
      res.sigma = eps;
      res.sigma_height = h;
      auto words = reach.decompose(checked_neg(eps_value(x, eps)));
      if (!words) throw Error("stage3_prune: internal error, representable value has no decomposition");
      res.rho = std::move(*words);
    }
    for (std::size_t i = 0; i < aj.size(); ++i) {
      if (!res.sigma.empty() && res.sigma[i] != 0)
        res.support.push_back(aj[i]);
      else
        res.kept.push_back(aj[i]);
    }
    out.push_back(std::move(res));
  }

  std::vector<Character> all;
  for (const auto& r : out) all.insert(all.end(), r.kept.begin(), r.kept.end());
  if (!all.empty() && !is_quasi_independent(all, options).qi)
    throw Error("stage3_prune: internal error, pruned union is not quasi-independent");
  return out;
}

}  // namespace sidonlab
