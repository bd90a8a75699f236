#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "axmhd/error.hpp"
#include "axmhd/simd/kernels.hpp"

namespace axmhd {

struct NodeTag {};
struct ElemTag {};

// Value array bound to one index set (nodes or elements) of a mesh.
template <class Tag>
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : v_(n, value) {}
  explicit Field(std::vector<double> values) : v_(std::move(values)) {}
  Field(std::initializer_list<double> values) : v_(values) {}

  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double* data() noexcept { return v_.data(); }
  const double* data() const noexcept { return v_.data(); }
  auto begin() noexcept { return v_.begin(); }
  auto end() noexcept { return v_.end(); }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }
  const std::vector<double>& values() const noexcept { return v_; }
  std::vector<double>& values() noexcept { return v_; }
  std::span<const double> span() const noexcept { return v_; }

  void fill(double value) { v_.assign(v_.size(), value); }

  Field& operator+=(const Field& o) {
    check(o);
    simd::kernels().add(data(), o.data(), data(), size());
    return *this;
  }
  Field& operator-=(const Field& o) {
    check(o);
    simd::kernels().sub(data(), o.data(), data(), size());
    return *this;
  }
  Field& operator*=(const Field& o) {
    check(o);
    simd::kernels().mul(data(), o.data(), data(), size());
    return *this;
  }
  Field& operator/=(const Field& o) {
    check(o);
    simd::kernels().div(data(), o.data(), data(), size());
    return *this;
  }
  Field& operator*=(double s) {
    simd::kernels().scale(s, data(), data(), size());
    return *this;
  }
  Field& operator+=(double s) {
    for (auto& x : v_) x += s;
    return *this;
  }
  // this += s * o
  Field& add_scaled(double s, const Field& o) {
    check(o);
    simd::kernels().axpy(data(), s, o.data(), data(), size());
    return *this;
  }

  void check(const Field& o) const {
    if (o.size() != size())
      fail(ErrorCode::SizeMismatch, "field sizes " + std::to_string(size()) + " vs " + std::to_string(o.size()));
  }

 private:
  std::vector<double> v_;
};

using NodalField = Field<NodeTag>;
using ElementField = Field<ElemTag>;

template <class Tag>
struct VectorField {
  Field<Tag> r;
  Field<Tag> z;
};

using NodalVectorField = VectorField<NodeTag>;
using ElementVectorField = VectorField<ElemTag>;

template <class Tag>
Field<Tag> operator+(Field<Tag> a, const Field<Tag>& b) { return a += b; }
template <class Tag>
Field<Tag> operator-(Field<Tag> a, const Field<Tag>& b) { return a -= b; }
template <class Tag>
Field<Tag> operator*(Field<Tag> a, const Field<Tag>& b) { return a *= b; }
template <class Tag>
Field<Tag> operator/(Field<Tag> a, const Field<Tag>& b) { return a /= b; }
template <class Tag>
Field<Tag> operator*(double s, Field<Tag> a) { return a *= s; }
template <class Tag>
Field<Tag> operator*(Field<Tag> a, double s) { return a *= s; }
template <class Tag>
Field<Tag> operator/(Field<Tag> a, double s) { return a *= 1.0 / s; }
template <class Tag>
Field<Tag> operator+(Field<Tag> a, double s) { return a += s; }
template <class Tag>
Field<Tag> operator+(double s, Field<Tag> a) { return a += s; }
template <class Tag>
Field<Tag> operator-(Field<Tag> a, double s) { return a += -s; }
template <class Tag>
Field<Tag> operator-(Field<Tag> a) { return a *= -1.0; }

template <class Tag>
double dot(const Field<Tag>& a, const Field<Tag>& b) {
  a.check(b);
  return simd::kernels().dot(a.data(), b.data(), a.size());
}

template <class Tag>
Field<Tag> square(const Field<Tag>& a) { return a * a; }

template <class Tag, class F>
Field<Tag> map(const Field<Tag>& a, F&& f) {
  Field<Tag> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

template <class Tag>
double max_abs(const Field<Tag>& a) {
  double m = 0.0;
  for (double x : a) m = x < 0 ? (-x > m ? -x : m) : (x > m ? x : m);
  return m;
}

}  // namespace axmhd
