#include <algorithm>

#include "sidonlab/errors.hpp"
#include "sidonlab/relations.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab {

std::size_t WordReach::IntHash::operator()(Int v) const noexcept {
  const auto u = static_cast<unsigned __int128>(v);
  const auto lo = static_cast<std::uint64_t>(u);
  const auto hi = static_cast<std::uint64_t>(u >> 64);
  return static_cast<std::size_t>(splitmix64(lo ^ splitmix64(hi)));
}

WordReach::WordReach(std::span<const WordBlock> blocks, std::uint64_t capacity) {
  std::uint64_t states = 0;
  auto charge = [&](std::size_t n) {
    states += n;
    if (states > capacity) throw CapacityError("word reachability tables exceed capacity");
  };

  for (const auto& block : blocks) {
    if (block.cap < 0) throw DomainError("word search: negative height cap");
    BlockTable table;
    table.characters = block.elements;
    for (const auto& c : block.elements) {
      if (c.family() != Family::Integer) throw DomainError("word search supports the integer family only");
      table.elements.push_back(c.value());
    }
    table.steps.emplace(Int{0}, Step{0, -1, 0});
    Int max_abs = 0;
    for (Int e : table.elements) max_abs = std::max(max_abs, abs_value(e));
    if (!table.elements.empty() && block.cap > 0) radius_ = checked_add(radius_, checked_mul(block.cap, max_abs));

    // Breadth-first layers give the minimal height of every value.
    std::vector<Int> frontier{0};
    for (Int h = 0; h < block.cap && !frontier.empty(); ++h) {
      std::vector<Int> next;
      for (Int v : frontier) {
        for (std::size_t i = 0; i < table.elements.size(); ++i) {
          for (int s : {1, -1}) {
            const Int w = s > 0 ? checked_add(v, table.elements[i]) : checked_sub(v, table.elements[i]);
            if (table.steps.try_emplace(w, Step{h + 1, static_cast<std::int32_t>(i), static_cast<std::int8_t>(s)})
                    .second)
              next.push_back(w);
          }
        }
      }
      charge(next.size());
      frontier = std::move(next);
    }
    blocks_.push_back(std::move(table));
  }

  // combined_[k] holds the values reachable with blocks 0..k, for k >= 1.
  combined_.resize(blocks_.size());
  for (std::size_t k = 1; k < blocks_.size(); ++k) {
    std::unordered_set<Int, IntHash> out;
    auto each_prev = [&](auto&& fn) {
      if (k == 1) {
        for (const auto& [v, st] : blocks_[0].steps) fn(v);
      } else {
        for (Int v : combined_[k - 1]) fn(v);
      }
    };
    each_prev([&](Int a) {
      for (const auto& [b, st] : blocks_[k].steps) {
        out.insert(checked_add(a, b));
        if (out.size() > capacity) throw CapacityError("combined word reach exceeds capacity");
      }
    });
    charge(out.size());
    combined_[k] = std::move(out);
  }
}

bool WordReach::representable(Int v) const {
  if (blocks_.empty()) return v == 0;
  if (v > radius_ || v < -radius_) return false;
  if (blocks_.size() == 1) return blocks_[0].steps.contains(v);
  return combined_.back().contains(v);
}

std::optional<Int> WordReach::min_height(std::size_t block, Int v) const {
  const auto& steps = blocks_.at(block).steps;
  auto it = steps.find(v);
  if (it == steps.end()) return std::nullopt;
  return it->second.height;
}

std::optional<std::vector<SignedWord>> WordReach::decompose(Int v) const {
  if (!representable(v)) return std::nullopt;
  std::vector<Int> parts(blocks_.size(), 0);
  auto in_prefix = [&](std::size_t k, Int x) {
    return k == 0 ? blocks_[0].steps.contains(x) : combined_[k].contains(x);
  };
  Int rest = v;
  for (std::size_t k = blocks_.size(); k-- > 1;) {
    bool found = false;
    for (const auto& [u, st] : blocks_[k].steps) {
      if (in_prefix(k - 1, checked_sub(rest, u))) {
        parts[k] = u;
        rest = checked_sub(rest, u);
        found = true;
        break;
      }
    }
    if (!found) throw Error("word reach tables are inconsistent");
  }
  if (!blocks_.empty()) parts[0] = rest;

  std::vector<SignedWord> words;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& table = blocks_[k];
    std::vector<Int> exps(table.elements.size(), 0);
    Int x = parts[k];
    for (;;) {
      const Step& st = table.steps.at(x);
      if (st.element < 0) break;
      const auto i = static_cast<std::size_t>(st.element);
      exps[i] = checked_add(exps[i], st.sign);
      x = st.sign > 0 ? checked_sub(x, table.elements[i]) : checked_add(x, table.elements[i]);
    }
    SignedWord w;
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] != 0) w.terms.push_back({table.characters[i], exps[i]});
    words.push_back(std::move(w));
  }
  return words;
}

std::optional<std::vector<SignedWord>> constrained_word_search(std::span<const WordBlock> blocks,
                                                               const Character& target,
                                                               const RelationOptions& options) {
  if (target.family() != Family::Integer) throw DomainError("word search supports the integer family only");
  WordReach reach(blocks, options.capacity);
  return reach.decompose(target.value());
}

}  // namespace sidonlab
