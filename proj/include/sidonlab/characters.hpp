#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sidonlab/integer.hpp"

namespace sidonlab {

/// The three concrete dual groups: Z (dual of the circle), the free abelian
/// group Z^(N) (dual of the infinite torus, Steinhaus variables), and the
/// Boolean group (dual of the Cantor group, Walsh functions).
enum class Family { Integer, FreeAbelian, Boolean };

/// JSON tags: "Z", "ZoplusN", "Walsh".
std::string_view family_tag(Family family);
Family parse_family_tag(std::string_view tag);

using Coordinate = std::uint32_t;

/// An element of the discrete dual group. Group law is written additively
/// internally; the identity is n = 0, the empty coordinate map, or the empty
/// index set. Payloads are kept normalised so equality is structural.
class Character {
 public:
  static Character integer(Int n);
  /// Zero entries are dropped; duplicate coordinates are summed.
  static Character free_abelian(std::vector<std::pair<Coordinate, Int>> coords);
  /// Duplicate indices cancel in pairs (r_j^2 = 1).
  static Character walsh(std::vector<Coordinate> indices);
  /// Generator of the j-th coordinate: e_j in Z^(N), r_j in the Boolean group.
  static Character basis(Family family, Coordinate j);
  static Character identity(Family family);

  Family family() const noexcept { return family_; }
  /// Integer payload; throws DomainError for the other families.
  Int value() const;
  const std::vector<std::pair<Coordinate, Int>>& coords() const noexcept { return coords_; }
  const std::vector<Coordinate>& indices() const noexcept { return indices_; }

  bool is_identity() const noexcept;
  Character inverse() const;

  /// Compact text form used as a map key in relation JSON: "8", "{0:1,3:-2}", "[0,2]".
  std::string key() const;

  friend bool operator==(const Character& a, const Character& b) noexcept;
  friend std::strong_ordering operator<=>(const Character& a, const Character& b) noexcept;

 private:
  explicit Character(Family family) : family_(family) {}

  Family family_;
  Int n_ = 0;
  std::vector<std::pair<Coordinate, Int>> coords_;
  std::vector<Coordinate> indices_;
};

/// A point of the compact group G: t in [0,1) on the circle, coordinates
/// omega_j in [0,1) on the torus power (default 0), or the set of indices
/// where g_j = 1 on the Cantor group.
class GroupPoint {
 public:
  static GroupPoint circle(double t);
  static GroupPoint torus(std::vector<std::pair<Coordinate, double>> coords);
  static GroupPoint cantor(std::vector<Coordinate> ones);

  Family family() const noexcept { return family_; }
  double t() const noexcept { return t_; }
  double coordinate(Coordinate j) const;
  bool bit(Coordinate j) const;

 private:
  explicit GroupPoint(Family family) : family_(family) {}

  Family family_;
  double t_ = 0.0;
  std::vector<std::pair<Coordinate, double>> coords_;
  std::vector<Coordinate> ones_;
};

struct Factor {
  Character character;
  Int exponent;
};

/// Normalised product prod gamma^n of the factors (a sum in additive notation).
/// Throws DomainError on an empty list or mixed families.
Character word_product(std::span<const Factor> factors);

inline bool is_identity(const Character& c) { return c.is_identity(); }

/// True iff gamma^2 = 1. Throws DomainError for the identity.
bool has_order_two(const Character& c);

/// Value of the character at x, a complex number of modulus one.
std::complex<double> evaluate(const Character& c, const GroupPoint& x);

/// Throws DomainError unless every character has the given family.
void require_family(std::span<const Character> set, Family family);
/// Family shared by a non-empty set; throws on mixed families.
Family common_family(std::span<const Character> set);

}  // namespace sidonlab
