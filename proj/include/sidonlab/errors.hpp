#pragma once

#include <stdexcept>
#include <string>

namespace sidonlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the input (mixed families, non-qi set where a qi
/// set is required, out-of-range parameter, malformed input).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rigorous answer was requested that the family cannot provide.
class UnsupportedCertification : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The input exceeds the configured exact-search capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic left the representable range.
class OverflowError : public CapacityError {
 public:
  using CapacityError::CapacityError;
};

/// A Las Vegas extraction ran out of attempts. `diagnostics` is a JSON text.
class ExtractionFailure : public Error {
 public:
  ExtractionFailure(const std::string& what, std::string diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace sidonlab
