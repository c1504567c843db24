#include "sidonlab/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sidonlab/errors.hpp"

namespace sidonlab {

std::string_view family_tag(Family family) {
  switch (family) {
    case Family::Integer: return "Z";
    case Family::FreeAbelian: return "ZoplusN";
    case Family::Boolean: return "Walsh";
  }
  return "?";
}

Family parse_family_tag(std::string_view tag) {
  if (tag == "Z") return Family::Integer;
  if (tag == "ZoplusN") return Family::FreeAbelian;
  if (tag == "Walsh") return Family::Boolean;
  throw DomainError("unknown family tag '" + std::string(tag) + "'");
}

Character Character::integer(Int n) {
  Character c(Family::Integer);
  c.n_ = n;
  return c;
}

Character Character::free_abelian(std::vector<std::pair<Coordinate, Int>> coords) {
  std::sort(coords.begin(), coords.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Character c(Family::FreeAbelian);
  for (const auto& [j, n] : coords) {
    if (!c.coords_.empty() && c.coords_.back().first == j) {
      c.coords_.back().second = checked_add(c.coords_.back().second, n);
    } else {
      c.coords_.emplace_back(j, n);
    }
  }
  std::erase_if(c.coords_, [](const auto& p) { return p.second == 0; });
  return c;
}

Character Character::walsh(std::vector<Coordinate> indices) {
  std::sort(indices.begin(), indices.end());
  Character c(Family::Boolean);
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i;
    while (j < indices.size() && indices[j] == indices[i]) ++j;
    if ((j - i) % 2 == 1) c.indices_.push_back(indices[i]);
    i = j;
  }
  return c;
}

Character Character::basis(Family family, Coordinate j) {
  switch (family) {
    case Family::Integer:
      throw DomainError("the integer family has no coordinate basis");
    case Family::FreeAbelian: return free_abelian({{j, 1}});
    case Family::Boolean: return walsh({j});
  }
  throw DomainError("bad family");
}

Character Character::identity(Family family) { return Character(family); }

Int Character::value() const {
  if (family_ != Family::Integer) throw DomainError("value() requires an integer character");
  return n_;
}

bool Character::is_identity() const noexcept {
  switch (family_) {
    case Family::Integer: return n_ == 0;
    case Family::FreeAbelian: return coords_.empty();
    case Family::Boolean: return indices_.empty();
  }
  return false;
}

Character Character::inverse() const {
  Character c(*this);
  c.n_ = checked_neg(n_);
  for (auto& p : c.coords_) p.second = checked_neg(p.second);
  return c;
}

std::string Character::key() const {
  switch (family_) {
    case Family::Integer: return to_string(n_);
    case Family::FreeAbelian: {
      std::string s = "{";
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(coords_[i].first) + ":" + to_string(coords_[i].second);
      }
      return s + "}";
    }
    case Family::Boolean: {
      std::string s = "[";
      for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(indices_[i]);
      }
      return s + "]";
    }
  }
  return {};
}

bool operator==(const Character& a, const Character& b) noexcept {
  return a.family_ == b.family_ && a.n_ == b.n_ && a.coords_ == b.coords_ &&
         a.indices_ == b.indices_;
}

std::strong_ordering operator<=>(const Character& a, const Character& b) noexcept {
  if (a.family_ != b.family_) return a.family_ <=> b.family_;
  switch (a.family_) {
    case Family::Integer:
      return a.n_ < b.n_ ? std::strong_ordering::less
                         : (a.n_ > b.n_ ? std::strong_ordering::greater
                                        : std::strong_ordering::equal);
    case Family::FreeAbelian: {
      const std::size_t n = std::min(a.coords_.size(), b.coords_.size());
      for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.coords_[i];
        const auto& y = b.coords_[i];
        if (x.first != y.first) return x.first <=> y.first;
        if (x.second != y.second)
          return x.second < y.second ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      return a.coords_.size() <=> b.coords_.size();
    }
    case Family::Boolean:
      return std::lexicographical_compare_three_way(a.indices_.begin(), a.indices_.end(),
                                                    b.indices_.begin(), b.indices_.end());
  }
  return std::strong_ordering::equal;
}

GroupPoint GroupPoint::circle(double t) {
  GroupPoint p(Family::Integer);
  p.t_ = t - std::floor(t);
  return p;
}

GroupPoint GroupPoint::torus(std::vector<std::pair<Coordinate, double>> coords) {
  GroupPoint p(Family::FreeAbelian);
  for (auto& [j, w] : coords) w -= std::floor(w);
  std::sort(coords.begin(), coords.end());
  p.coords_ = std::move(coords);
  return p;
}

GroupPoint GroupPoint::cantor(std::vector<Coordinate> ones) {
  GroupPoint p(Family::Boolean);
  std::sort(ones.begin(), ones.end());
  ones.erase(std::unique(ones.begin(), ones.end()), ones.end());
  p.ones_ = std::move(ones);
  return p;
}

double GroupPoint::coordinate(Coordinate j) const {
  auto it = std::lower_bound(coords_.begin(), coords_.end(), j,
                             [](const auto& p, Coordinate k) { return p.first < k; });
  return (it != coords_.end() && it->first == j) ? it->second : 0.0;
}

bool GroupPoint::bit(Coordinate j) const {
  return std::binary_search(ones_.begin(), ones_.end(), j);
}

Character word_product(std::span<const Factor> factors) {
  if (factors.empty()) throw DomainError("word_product needs at least one factor");
  const Family family = factors.front().character.family();
  for (const auto& f : factors)
    if (f.character.family() != family) throw DomainError("word_product: mixed families");

  switch (family) {
    case Family::Integer: {
      Int sum = 0;
      for (const auto& f : factors)
        sum = checked_add(sum, checked_mul(f.character.value(), f.exponent));
      return Character::integer(sum);
    }
    case Family::FreeAbelian: {
      std::vector<std::pair<Coordinate, Int>> all;
      for (const auto& f : factors)
        for (const auto& [j, n] : f.character.coords()) all.emplace_back(j, checked_mul(n, f.exponent));
      return Character::free_abelian(std::move(all));
    }
    case Family::Boolean: {
      std::vector<Coordinate> all;
      for (const auto& f : factors) {
        if (f.exponent % 2 == 0) continue;
        all.insert(all.end(), f.character.indices().begin(), f.character.indices().end());
      }
      return Character::walsh(std::move(all));
    }
  }
  throw DomainError("bad family");
}

bool has_order_two(const Character& c) {
  if (c.is_identity()) throw DomainError("has_order_two: identity character");
  return c.family() == Family::Boolean;
}

namespace {
// e^{2 pi i x} with x reduced to [0,1) first.
std::complex<double> unit(long double x) {
  x -= std::floor(x);
  const double angle = static_cast<double>(2.0L * std::numbers::pi_v<long double> * x);
  return {std::cos(angle), std::sin(angle)};
}
}  // namespace

std::complex<double> evaluate(const Character& c, const GroupPoint& x) {
  if (c.family() != x.family()) throw DomainError("evaluate: character and point families differ");
  switch (c.family()) {
    case Family::Integer: {
      // frac(n t) computed from n mod 2^64 keeps the phase exact for large n
      // when t has a short binary expansion.
      const long double t = x.t();
      const Int n = c.value();
      const Int hi = n / (static_cast<Int>(1) << 32);
      const Int lo = n % (static_cast<Int>(1) << 32);
      long double phase = static_cast<long double>(lo) * t;
      long double hpart = static_cast<long double>(hi) * t;
      hpart -= std::floor(hpart);
      phase += hpart * 4294967296.0L;
      return unit(phase);
    }
    case Family::FreeAbelian: {
      long double phase = 0;
      for (const auto& [j, n] : c.coords()) {
        long double term = static_cast<long double>(n) * x.coordinate(j);
        phase += term - std::floor(term);
      }
      return unit(phase);
    }
    case Family::Boolean: {
      int parity = 0;
      for (Coordinate j : c.indices()) parity ^= x.bit(j) ? 1 : 0;
      return {parity ? -1.0 : 1.0, 0.0};
    }
  }
  return {1.0, 0.0};
}

void require_family(std::span<const Character> set, Family family) {
  for (const auto& c : set)
    if (c.family() != family)
      throw DomainError("expected family " + std::string(family_tag(family)) + ", got " +
                        std::string(family_tag(c.family())));
}

Family common_family(std::span<const Character> set) {
  if (set.empty()) throw DomainError("cannot infer the family of an empty set");
  const Family f = set.front().family();
  require_family(set, f);
  return f;
}

}  // namespace sidonlab
