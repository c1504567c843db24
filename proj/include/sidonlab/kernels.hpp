#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace sidonlab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Inner loops of the norm computations. Every entry has a scalar reference
/// and, where built, an AVX2 variant; results agree to rounding (fwht bitwise).
struct KernelTable {
  /// out[j] += sum_k c_k * tw[(f_k * j) mod m] for j < m, m a power of two,
  /// tw[r] = exp(2 pi i r / m).
  void (*accumulate_terms)(const double* c_re, const double* c_im, const std::uint64_t* freq, std::size_t terms,
                           const double* tw_re, const double* tw_im, std::size_t m, double* out_re,
                           double* out_im);
  /// max_j re_j^2 + im_j^2.
  double (*max_modulus_sq)(const double* re, const double* im, std::size_t n);
  /// sum_j (re_j^2 + im_j^2)^half_p.
  double (*sum_modulus_pow_even)(const double* re, const double* im, std::size_t n, unsigned half_p);
  /// Unnormalised in-place Walsh-Hadamard transform, n a power of two.
  void (*fwht)(double* data, std::size_t n);
};

const KernelTable& scalar_table();
#if SIDONLAB_HAS_AVX2
const KernelTable& avx2_table();
#endif

bool isa_available(Isa isa);
/// Table for the given ISA; throws DomainError if it is not available.
const KernelTable& table(Isa isa);

/// Best available ISA, unless SIDONLAB_ISA=scalar forces the reference path.
Isa active_isa();
const KernelTable& active();

}  // namespace sidonlab::kernels
