#include "sidonlab/fourier.hpp"

#include "sidonlab/errors.hpp"

namespace sidonlab {

Complex FourierExpansion::coefficient(const Character& gamma) const {
  auto it = terms_.find(gamma);
  return it == terms_.end() ? Complex{} : it->second;
}

void FourierExpansion::add(const Character& gamma, Complex c) {
  if (gamma.family() != family_) throw DomainError("expansion: character family mismatch");
  terms_[gamma] += c;
}

void FourierExpansion::normalise(double threshold) {
  std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) < threshold; });
}

Complex FourierExpansion::evaluate(const GroupPoint& x) const {
  Complex sum{};
  for (const auto& [gamma, c] : terms_) sum += c * sidonlab::evaluate(gamma, x);
  return sum;
}

FourierExpansion FourierExpansion::scaled(Complex s) const {
  FourierExpansion out(family_);
  for (const auto& [gamma, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), gamma, c * s);
  return out;
}

FourierExpansion& FourierExpansion::operator+=(const FourierExpansion& other) {
  if (other.family_ != family_) throw DomainError("expansion: family mismatch");
  for (const auto& [gamma, c] : other.terms_) terms_[gamma] += c;
  return *this;
}

}  // namespace sidonlab
