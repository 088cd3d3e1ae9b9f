#pragma once

#include "kenlab/types.hpp"

#include <vector>

namespace kenlab {

/// Dense array with Rank indices, each ranging over [0, n).
template <int Rank>
class tensor {
 public:
  tensor() = default;
  explicit tensor(int n) : n_(n), d_(size_for(n), real(0)) {}

  int dim() const { return n_; }
  std::size_t size() const { return d_.size(); }
  real* data() { return d_.data(); }
  const real* data() const { return d_.data(); }

  template <class... I>
  real& operator()(I... i) {
    static_assert(sizeof...(I) == Rank);
    return d_[index(i...)];
  }
  template <class... I>
  real operator()(I... i) const {
    static_assert(sizeof...(I) == Rank);
    return d_[index(i...)];
  }

  tensor& operator+=(const tensor& o) {
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
  }
  tensor& operator-=(const tensor& o) {
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
  }
  tensor& operator*=(real c) {
    for (auto& x : d_) x *= c;
    return *this;
  }
  friend tensor operator+(tensor a, const tensor& b) { return a += b; }
  friend tensor operator-(tensor a, const tensor& b) { return a -= b; }
  friend tensor operator*(tensor a, real c) { return a *= c; }
  friend tensor operator*(real c, tensor a) { return a *= c; }
  friend tensor operator/(tensor a, real c) { return a *= real(1) / c; }

  real max_abs() const {
    real m = 0;
    for (real x : d_) m = std::max(m, x < 0 ? -x : x);
    return m;
  }

 private:
  int n_ = 0;
  std::vector<real> d_;

  static std::size_t size_for(int n) {
    std::size_t s = 1;
    for (int k = 0; k < Rank; ++k) s *= static_cast<std::size_t>(n);
    return s;
  }

  template <class... I>
  std::size_t index(I... i) const {
    std::size_t k = 0;
    ((k = k * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)), ...);
    return k;
  }
};

using tensor3 = tensor<3>;
using tensor4 = tensor<4>;

inline real max_abs(const tensor3& t) { return t.max_abs(); }
inline real max_abs(const tensor4& t) { return t.max_abs(); }

/// T(a, b, c) X^b Y^c for a (1,2) array.
inline vec contract(const tensor3& t, const vec& x, const vec& y) {
  int n = t.dim();
  vec out = vec::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out[a] += t(a, b, c) * x[b] * y[c];
  return out;
}

/// T(a, b, c, d) Z^b X^c Y^d, the layout of curvature-like arrays.
inline vec contract(const tensor4& t, const vec& x, const vec& y, const vec& z) {
  int n = t.dim();
  vec out = vec::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out[a] += t(a, b, c, d) * z[b] * x[c] * y[d];
  return out;
}

}  // namespace kenlab
