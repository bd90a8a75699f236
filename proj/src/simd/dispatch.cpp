#include <atomic>
#include <cstdlib>
#include <cstring>

#include "axmhd/simd/kernels.hpp"

namespace axmhd::simd {

#ifndef AXMHD_HAVE_AVX2
namespace detail {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace detail
#endif

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(AXMHD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return detail::avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return *detail::avx2_kernels();
  return scalar_kernels();
}

namespace {

const KernelTable* select() {
  const char* env = std::getenv("AXMHD_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
  return &kernels_for(Isa::Avx2);
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{select()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) { active().store(&kernels_for(isa), std::memory_order_relaxed); }

}  // namespace axmhd::simd
