#pragma once

#include <cstddef>
#include <cstdint>

namespace axmhd::simd {

enum class Isa { Scalar, Avx2 };

struct CsrView {
  std::size_t rows = 0;
  const std::int64_t* row_ptr = nullptr;
  const std::int32_t* col = nullptr;
  const double* val = nullptr;
};

// y = A x
using SpmvFn = void (*)(const CsrView& a, const double* x, double* y);
// y = A (d ∘ x), scratch-free
using SpmvScaledFn = void (*)(const CsrView& a, const double* d, const double* x, double* y);
// y_i = Σ_k a_ik (x_k − x_anchor(i)); equals A x when rows sum to zero, and is exactly 0 on constants
using SpmvAnchoredFn = void (*)(const CsrView& a, const std::int32_t* anchor, const double* x, double* y);
// out = a ∘ b
using BinaryFn = void (*)(const double* a, const double* b, double* out, std::size_t n);
// out = a + s * b
using AxpyFn = void (*)(const double* a, double s, const double* b, double* out, std::size_t n);
// out = s * a
using ScaleFn = void (*)(double s, const double* a, double* out, std::size_t n);
using DotFn = double (*)(const double* a, const double* b, std::size_t n);

struct KernelTable {
  Isa isa;
  const char* name;
  SpmvFn spmv;
  SpmvScaledFn spmv_scaled;
  SpmvAnchoredFn spmv_anchored;
  BinaryFn add;
  BinaryFn sub;
  BinaryFn mul;
  BinaryFn div;
  AxpyFn axpy;
  ScaleFn scale;
  DotFn dot;
};

const KernelTable& scalar_kernels();
bool isa_available(Isa isa);
const KernelTable& kernels_for(Isa isa);

// Active table. Chosen once from CPU features; AXMHD_SIMD=scalar forces the reference path.
const KernelTable& kernels();
void force_isa(Isa isa);

namespace detail {
const KernelTable* avx2_kernels();
}

}  // namespace axmhd::simd
