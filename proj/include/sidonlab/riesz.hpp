#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sidonlab/errors.hpp"
#include "sidonlab/fourier.hpp"
#include "sidonlab/relations.hpp"

namespace sidonlab {

/// Raised when a construction that needs a quasi-independent set receives a
/// set with a relation; carries the witness.
class NotQuasiIndependent : public DomainError {
 public:
  explicit NotQuasiIndependent(EpsilonRelation witness);
  const EpsilonRelation& witness() const noexcept { return witness_; }

 private:
  EpsilonRelation witness_;
};

using PhaseMap = std::map<Character, Complex>;

/// Amplitude a in (0,1) and unimodular phases z_lambda (missing entries are 1).
struct RieszParams {
  double a = 0.5;
  PhaseMap z;

  Complex phase(const Character& lambda) const;
  void validate() const;
};

/// Largest set accepted by the symbolic expansions.
inline constexpr std::size_t kRieszMaxSize = 20;

/// prod (1 + (gamma + conj gamma)/2), expanded exactly.
FourierExpansion riesz_product(std::span<const Character> set, const RelationOptions& options = {});

/// The slice sum eps = 1 of R_{a,z}: sum (a/2)^{|eps|} prod (z lambda)^eps.
/// Order-two characters contribute z and conj z on the same lambda.
FourierExpansion riesz_star(std::span<const Character> set, const RieszParams& params,
                            const RelationOptions& options = {});

/// One coefficient of R_{a,z} at gamma without building the full expansion,
/// optionally restricted to the slice sum eps = slice.
Complex riesz_coefficient(std::span<const Character> set, const RieszParams& params, const Character& gamma,
                          std::optional<int> slice = std::nullopt);

/// Mean of the starred products of k pairwise disjoint qi parts.
FourierExpansion riesz_union(std::span<const std::vector<Character>> parts, std::span<const RieszParams> params,
                             const RelationOptions& options = {});

struct WitnessReport {
  bool ok = false;
  double min_margin = 0.0;  // min Re(conj z_lambda mu(lambda)) - bound
  std::vector<std::pair<Character, double>> margins;
};

/// Checks Re(conj z_lambda * mu(lambda)) >= bound for every lambda in the set.
WitnessReport verify_sidon_witness(std::span<const Character> set, const PhaseMap& z, const FourierExpansion& mu,
                                   double bound);

struct ConstantChoice {
  double a = 0.0;
  double S = 0.0;
};

/// order 3: maximiser of a/2 - a^3/2; order 5: of a/2 - a^3/8 - a^5/2.
ConstantChoice optimize_qi_constant(int order);

/// Sidon constant 3 sqrt3 k sqrt(2k-1) of a union of k qi sets and its amplitude.
ConstantChoice union_constant(int k);

struct CbConstant {
  double c = 0.0;
  double a = 0.0;
  double inv_S_printed = 0.0;  // c^{3/2}(c+2)^{-1/2}(6-c)/(12 sqrt3)
  double inv_S_derived = 0.0;  // c^{3/2}(c+2)^{-1/2}/(3 sqrt3)
  double inv_S_grid = 0.0;     // max of c(a/2 - a^3/2) - a^3 over a grid in (0,1)
  bool discrepancy = false;
  /// The value used downstream: the smaller of the printed and derived values.
  double inv_S() const { return inv_S_derived < inv_S_printed ? inv_S_derived : inv_S_printed; }
};

CbConstant cb_sidon_constant(double c, std::size_t grid_points = 1000000);

}  // namespace sidonlab
