#pragma once

#include <complex>
#include <map>

#include "sidonlab/characters.hpp"

namespace sidonlab {

using Complex = std::complex<double>;

/// Finite Fourier series sum c_gamma gamma over one family. Coefficients whose
/// modulus falls below the pruning threshold are dropped on normalise().
class FourierExpansion {
 public:
  static constexpr double kPrune = 1e-15;

  explicit FourierExpansion(Family family) : family_(family) {}

  Family family() const noexcept { return family_; }
  const std::map<Character, Complex>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Coefficient at gamma, zero when absent.
  Complex coefficient(const Character& gamma) const;
  /// Adds c to the coefficient of gamma (no pruning).
  void add(const Character& gamma, Complex c);
  void normalise(double threshold = kPrune);

  Complex evaluate(const GroupPoint& x) const;
  FourierExpansion scaled(Complex s) const;
  FourierExpansion& operator+=(const FourierExpansion& other);

 private:
  Family family_;
  std::map<Character, Complex> terms_;
};

}  // namespace sidonlab
