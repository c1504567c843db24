#include <cstdlib>
#include <cstring>

#include "sidonlab/errors.hpp"
#include "sidonlab/kernels.hpp"

namespace sidonlab::kernels {

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if SIDONLAB_HAS_AVX2
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok;
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) throw DomainError("kernel ISA " + std::string(isa_name(isa)) + " is not available");
#if SIDONLAB_HAS_AVX2
  if (isa == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("SIDONLAB_ISA");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

const KernelTable& active() { return table(active_isa()); }

}  // namespace sidonlab::kernels
