#include "axmhd/simd/kernels.hpp"

namespace axmhd::simd {
namespace {

void spmv(const CsrView& a, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) acc += a.val[k] * x[a.col[k]];
    y[i] = acc;
  }
}

void spmv_scaled(const CsrView& a, const double* d, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const auto j = a.col[k];
      acc += a.val[k] * (d[j] * x[j]);
    }
    y[i] = acc;
  }
}

void spmv_anchored(const CsrView& a, const std::int32_t* anchor, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double x0 = x[anchor[i]];
    double acc = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) acc += a.val[k] * (x[a.col[k]] - x0);
    y[i] = acc;
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}
void axpy(const double* a, double s, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}
void scale(double s, const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * a[i];
}
double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

const KernelTable table{Isa::Scalar, "scalar", spmv, spmv_scaled, spmv_anchored, add, sub, mul, div, axpy, scale, dot};

}  // namespace

const KernelTable& scalar_kernels() { return table; }

}  // namespace axmhd::simd
