#include <immintrin.h>

#include "axmhd/simd/kernels.hpp"

namespace axmhd::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void spmv(const CsrView& a, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::int64_t k = a.row_ptr[i];
    const std::int64_t end = a.row_ptr[i + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col + k));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

void spmv_scaled(const CsrView& a, const double* d, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::int64_t k = a.row_ptr[i];
    const std::int64_t end = a.row_ptr[i + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col + k));
      __m256d xv = _mm256_mul_pd(_mm256_i32gather_pd(d, idx, 8), _mm256_i32gather_pd(x, idx, 8));
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) {
      const auto j = a.col[k];
      s += a.val[k] * (d[j] * x[j]);
    }
    y[i] = s;
  }
}

void spmv_anchored(const CsrView& a, const std::int32_t* anchor, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::int64_t k = a.row_ptr[i];
    const std::int64_t end = a.row_ptr[i + 1];
    const double x0 = x[anchor[i]];
    const __m256d x0v = _mm256_set1_pd(x0);
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col + k));
      __m256d xv = _mm256_sub_pd(_mm256_i32gather_pd(x, idx, 8), x0v);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += a.val[k] * (x[a.col[k]] - x0);
    y[i] = s;
  }
}

template <class Op, class Tail>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Op op, Tail tail) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = tail(a[i], b[i]);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); },
         [](double x, double y) { return x + y; });
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); },
         [](double x, double y) { return x - y; });
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); },
         [](double x, double y) { return x * y; });
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_div_pd(x, y); },
         [](double x, double y) { return x / y; });
}

// No FMA here so the elementwise results stay bit-identical to the scalar path.
void axpy(const double* a, double s, const double* b, double* out, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_mul_pd(sv, _mm256_loadu_pd(b + i))));
  for (; i < n; ++i) out[i] = a[i] + s * b[i];
}

void scale(double s, const double* a, double* out, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(sv, _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) out[i] = s * a[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

const KernelTable table{Isa::Avx2, "avx2", spmv, spmv_scaled, spmv_anchored, add, sub, mul, div, axpy, scale, dot};

}  // namespace

namespace detail {
const KernelTable* avx2_kernels() { return &table; }
}  // namespace detail

}  // namespace axmhd::simd
