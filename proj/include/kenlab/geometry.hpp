#pragma once

// Levi-Civita geometry from finite-difference metric jets.
//
// Index conventions:
//   gamma(a, b, c)     = Gamma^a_{bc}
//   dgamma(e, a, b, c) = d_e Gamma^a_{bc}
//   riem(a, b, c, d)   = R^a_{bcd}, with R_{X,Y}Z = R^a_{bcd} Z^b X^c Y^d
//                        and R_{X,Y} = [nabla_X, nabla_Y] - nabla_{[X,Y]}
//   ric(b, d)          = R^a_{bad}   (trace of Z -> R_{Z,X}Y)
//   ric_sharp(a, b)    = g^{ac} ric(c, b)
//   jacobian(a, c)     = d_c V^a,  so  D_X V = J X
//   hessian(a, b, c)   = d_b d_c V^a

#include "kenlab/manifold.hpp"
#include "kenlab/stencil.hpp"
#include "kenlab/tensor.hpp"

#include <array>
#include <vector>

namespace kenlab {

/// Partial derivatives d_c f at p for every coordinate c.
template <class F>
auto partials(const charted_manifold& m, F&& f, const point& p, real h) {
  using T = std::decay_t<decltype(f(p))>;
  std::vector<T> out;
  out.reserve(m.dim());
  for (int c = 0; c < m.dim(); ++c) {
    out.push_back(stencil::along(
        [&](const point& q) {
          m.require_inside(q);
          return T(f(q));
        },
        p, basis(m.dim(), c), h));
  }
  return out;
}

/// Derivative of f along the vector v (v^c d_c f) with the box checked.
template <class F>
auto derivative_along(const charted_manifold& m, F&& f, const point& p, const vec& v, real h) {
  using T = std::decay_t<decltype(f(p))>;
  return stencil::directional(
      [&](const point& q) {
        m.require_inside(q);
        return T(f(q));
      },
      p, v, h);
}

inline mat jacobian(const charted_manifold& m, const vector_field& v, const point& p, real h) {
  int n = m.dim();
  auto d = partials(m, v, p, h);
  mat j(n, n);
  for (int c = 0; c < n; ++c) j.col(c) = d[c];
  return j;
}

inline tensor3 hessian(const charted_manifold& m, const vector_field& v, const point& p, real h) {
  int n = m.dim();
  tensor3 out(n);
  vec center = v(p);
  for (int b = 0; b < n; ++b) {
    for (int c = b; c < n; ++c) {
      vec acc = vec::Zero(n);
      if (b == c) {
        for (int k = 0; k < 4; ++k) {
          point q = p + stencil::offsets[k] * h * basis(n, b);
          m.require_inside(q);
          acc += stencil::second[k] * v(q);
        }
        acc += stencil::second_center * center;
        acc /= stencil::divisor;
      } else {
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            point q = p + stencil::offsets[k] * h * basis(n, b) + stencil::offsets[l] * h * basis(n, c);
            m.require_inside(q);
            acc += stencil::first[k] * stencil::first[l] * v(q);
          }
        acc /= stencil::divisor * stencil::divisor;
      }
      acc /= h * h;
      for (int a = 0; a < n; ++a) out(a, b, c) = out(a, c, b) = acc[a];
    }
  }
  return out;
}

/// Lie bracket [X, Y] = D_X Y - D_Y X; needs no metric.
inline vec lie_bracket(const charted_manifold& m, const vector_field& x, const vector_field& y,
                       const point& p, real h) {
  return derivative_along(m, y, p, x(p), h) - derivative_along(m, x, p, y(p), h);
}

/// Everything computable from the metric 2-jet at one point.
struct local_geometry {
  int n = 0;
  point p;
  real h = 0;
  int order = 2;  // 1: Christoffel only
  mat g, ginv;
  std::vector<mat> dg;  // dg[c] = d_c g
  tensor3 gamma;
  tensor4 dgamma;
  tensor4 riem;
  mat ric, ric_sharp;
  real scalar = 0;

  real ip(const vec& x, const vec& y) const { return x.dot(g * y); }

  /// nabla_X Y for Y given by its value and jacobian at p.
  vec nabla(const vec& x, const vec& y, const mat& jy) const { return jy * x + christoffel(x, y); }

  /// Gamma^a_{bc} X^b Y^c.
  vec christoffel(const vec& x, const vec& y) const { return contract(gamma, x, y); }

  /// R_{X,Y}Z, summed over c < d so that swapping X and Y negates exactly.
  vec riemann(const vec& x, const vec& y, const vec& z) const {
    vec out = vec::Zero(n);
    for (int c = 0; c < n; ++c)
      for (int d = c + 1; d < n; ++d) {
        real w = x[c] * y[d] - x[d] * y[c];
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) out[a] += riem(a, b, c, d) * z[b] * w;
      }
    return out;
  }

  /// Covariant jacobian N(a, c) = (nabla_c V)^a, so nabla_X V = N X.
  mat covariant_jacobian(const vec& v, const mat& jv) const {
    mat out = jv;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) out(a, c) += gamma(a, c, b) * v[b];
    return out;
  }

  /// (nabla_c S)^a_b for a (1,1) tensor with value s and partials ds[c].
  std::vector<mat> covariant_11(const mat& s, const std::vector<mat>& ds) const {
    std::vector<mat> out(n);
    for (int c = 0; c < n; ++c) {
      mat gc(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) gc(a, b) = gamma(a, c, b);
      out[c] = ds[c] + gc * s - s * gc;
    }
    return out;
  }

  /// (nabla_c omega)_b for a covector with value w and partials dw[c].
  std::vector<vec> covariant_covector(const vec& w, const std::vector<vec>& dw) const {
    std::vector<vec> out(n);
    for (int c = 0; c < n; ++c) {
      out[c] = dw[c];
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) out[c][b] -= gamma(e, c, b) * w[e];
    }
    return out;
  }

  /// (nabla_c T)(a, b) for a (0,2) tensor.
  std::vector<mat> covariant_02(const mat& t, const std::vector<mat>& dt) const {
    std::vector<mat> out(n);
    for (int c = 0; c < n; ++c) {
      mat gc(n, n);  // gc(f, a) = Gamma^f_{ca}
      for (int f = 0; f < n; ++f)
        for (int a = 0; a < n; ++a) gc(f, a) = gamma(f, c, a);
      out[c] = dt[c] - gc.transpose() * t - t * gc;
    }
    return out;
  }

  /// (nabla_e L)^a_{cb} for a (1,2) array with partials dl[e].
  std::vector<tensor3> covariant_12(const tensor3& l, const std::vector<tensor3>& dl) const {
    std::vector<tensor3> out;
    for (int e = 0; e < n; ++e) {
      tensor3 t = dl[e];
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          for (int b = 0; b < n; ++b) {
            real v = 0;
            for (int f = 0; f < n; ++f)
              v += gamma(a, e, f) * l(f, c, b) - gamma(f, e, c) * l(a, f, b) - gamma(f, e, b) * l(a, c, f);
            t(a, c, b) += v;
          }
      out.push_back(std::move(t));
    }
    return out;
  }
};

inline local_geometry geometry_at(const charted_manifold& m, const point& p, real h, int order = 2) {
  const int n = m.dim();
  local_geometry geo;
  geo.n = n;
  geo.p = p;
  geo.h = h;
  geo.order = order;
  geo.g = m.metric_at(p);
  geo.ginv = geo.g.inverse();
  geo.ginv = (geo.ginv + geo.ginv.transpose()) / 2;

  std::vector<std::array<mat, 4>> line(n);
  geo.dg.assign(n, mat::Zero(n, n));
  for (int c = 0; c < n; ++c)
    for (int k = 0; k < 4; ++k) {
      line[c][k] = m.metric_at(p + stencil::offsets[k] * h * basis(n, c));
      geo.dg[c] += stencil::first[k] * line[c][k];
    }
  for (auto& d : geo.dg) d /= stencil::divisor * h;

  // lowered symbols Gamma_{d,bc}
  tensor3 low(n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c)
        low(d, b, c) = low(d, c, b) =
            (geo.dg[b](d, c) + geo.dg[c](d, b) - geo.dg[d](b, c)) / 2;
  geo.gamma = tensor3(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        real v = 0;
        for (int d = 0; d < n; ++d) v += geo.ginv(a, d) * low(d, b, c);
        geo.gamma(a, b, c) = geo.gamma(a, c, b) = v;
      }
  if (order < 2) return geo;

  // second derivatives of the metric, ddg[e * n + b] = d_e d_b g
  std::vector<mat> ddg(static_cast<std::size_t>(n) * n);
  for (int e = 0; e < n; ++e) {
    mat acc = stencil::second_center * geo.g;
    for (int k = 0; k < 4; ++k) acc += stencil::second[k] * line[e][k];
    ddg[e * n + e] = acc / (stencil::divisor * h * h);
    for (int b = e + 1; b < n; ++b) {
      mat mix = mat::Zero(n, n);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          mix += stencil::first[k] * stencil::first[l] *
                 m.metric_at(p + stencil::offsets[k] * h * basis(n, e) +
                             stencil::offsets[l] * h * basis(n, b));
      ddg[e * n + b] = ddg[b * n + e] = mix / (stencil::divisor * stencil::divisor * h * h);
    }
  }

  geo.dgamma = tensor4(n);
  for (int e = 0; e < n; ++e) {
    mat dginv = -geo.ginv * geo.dg[e] * geo.ginv;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = b; c < n; ++c) {
          real v = 0;
          for (int d = 0; d < n; ++d) {
            real dlow = (ddg[e * n + b](d, c) + ddg[e * n + c](d, b) - ddg[e * n + d](b, c)) / 2;
            v += dginv(a, d) * low(d, b, c) + geo.ginv(a, d) * dlow;
          }
          geo.dgamma(e, a, b, c) = geo.dgamma(e, a, c, b) = v;
        }
  }

  geo.riem = tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          real v = geo.dgamma(c, a, d, b) - geo.dgamma(d, a, c, b);
          for (int e = 0; e < n; ++e)
            v += geo.gamma(a, c, e) * geo.gamma(e, d, b) - geo.gamma(a, d, e) * geo.gamma(e, c, b);
          geo.riem(a, b, c, d) = v;
          geo.riem(a, b, d, c) = -v;
        }

  geo.ric = mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) geo.ric(b, d) += geo.riem(a, b, a, d);
  geo.ric_sharp = geo.ginv * geo.ric;
  geo.scalar = geo.ric_sharp.trace();
  return geo;
}

/// Local geometries at p +- k * step * e_c (k = 1, 2) for nested differencing
/// of quantities that already contain two metric derivatives.
struct nested_geometry {
  local_geometry center;
  real step = 0;
  std::vector<std::array<local_geometry, 4>> around;  // around[c][k]

  /// d_c f(geometry) for every coordinate c.
  template <class F>
  auto partials(F&& f) const {
    using T = std::decay_t<decltype(f(center))>;
    std::vector<T> out;
    for (int c = 0; c < center.n; ++c) {
      T acc = f(around[c][0]) * stencil::first[0];
      for (int k = 1; k < 4; ++k) acc = acc + f(around[c][k]) * stencil::first[k];
      out.push_back(T(acc * (real(1) / (stencil::divisor * step))));
    }
    return out;
  }
};

/// Nested layer uses step 2h around the jets of step h.
inline nested_geometry nested_geometry_at(const charted_manifold& m, const point& p, real h) {
  nested_geometry ng;
  ng.center = geometry_at(m, p, h);
  ng.step = 2 * h;
  int n = m.dim();
  ng.around.resize(n);
  for (int c = 0; c < n; ++c)
    for (int k = 0; k < 4; ++k)
      ng.around[c][k] = geometry_at(m, p + stencil::offsets[k] * ng.step * basis(n, c), h);
  return ng;
}

// --- curvature derivatives --------------------------------------------------

/// nabla Ric as (nabla_c Ric)(a, b).
inline std::vector<mat> nabla_ricci(const nested_geometry& ng) {
  auto d = ng.partials([](const local_geometry& g) { return mat(g.ric); });
  return ng.center.covariant_02(ng.center.ric, d);
}

/// nabla Ric^sharp as (nabla_c Ric^sharp)^a_b.
inline std::vector<mat> nabla_ricci_operator(const nested_geometry& ng) {
  auto d = ng.partials([](const local_geometry& g) { return mat(g.ric_sharp); });
  return ng.center.covariant_11(ng.center.ric_sharp, d);
}

/// Gradient components d_c r of the scalar curvature.
inline vec scalar_gradient(const nested_geometry& ng) {
  auto d = ng.partials([](const local_geometry& g) { return g.scalar; });
  vec out(ng.center.n);
  for (int c = 0; c < ng.center.n; ++c) out[c] = d[c];
  return out;
}

// --- Lie derivatives ----------------------------------------------------------

/// (L_V g)(c, d) = g(nabla_c V, e_d) + g(nabla_d V, e_c).
inline mat lie_derivative_metric(const local_geometry& geo, const vec& v, const mat& jv) {
  mat gn = geo.g * geo.covariant_jacobian(v, jv);
  return gn + gn.transpose();
}

inline mat lie_derivative_metric(const charted_manifold& m, const local_geometry& geo,
                                 const vector_field& v) {
  return lie_derivative_metric(geo, v(geo.p), jacobian(m, v, geo.p, geo.h));
}

/// Second covariant derivative W(a, c, b) = (nabla^2_{c,b} V)^a, i.e.
/// nabla_X nabla_Y V - nabla_{nabla_X Y} V with X = e_c, Y = e_b.
inline tensor3 second_covariant(const local_geometry& geo, const vec& v, const mat& jv,
                                const tensor3& hv) {
  int n = geo.n;
  mat nv = geo.covariant_jacobian(v, jv);
  tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        real d = hv(a, c, b);
        for (int e = 0; e < n; ++e)
          d += geo.dgamma(c, a, b, e) * v[e] + geo.gamma(a, b, e) * jv(e, c) +
               geo.gamma(a, c, e) * nv(e, b) - geo.gamma(e, c, b) * nv(a, e);
        out(a, c, b) = d;
      }
  return out;
}

/// (L_V nabla)(X, Y) = nabla_X nabla_Y V - nabla_{nabla_X Y} V + R_{V,X} Y,
/// as L(a, c, b) with X = e_c, Y = e_b.
inline tensor3 lie_derivative_connection(const local_geometry& geo, const vec& v, const mat& jv,
                                         const tensor3& hv) {
  int n = geo.n;
  tensor3 out = second_covariant(geo, v, jv, hv);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) out(a, c, b) += geo.riem(a, b, e, c) * v[e];
  return out;
}

inline tensor3 lie_derivative_connection(const charted_manifold& m, const local_geometry& geo,
                                         const vector_field& v) {
  return lie_derivative_connection(geo, v(geo.p), jacobian(m, v, geo.p, geo.h),
                                   hessian(m, v, geo.p, geo.h));
}

/// Same tensor from its definition
///   (L_V nabla)(X, Y) = [V, nabla_X Y] - nabla_{[V,X]} Y - nabla_X [V, Y]
/// on coordinate fields, with the derivative of the connection along V taken
/// by differencing Christoffel symbols at shifted points (step 2h).
inline tensor3 lie_derivative_connection_transport(const charted_manifold& m,
                                                   const local_geometry& geo,
                                                   const vector_field& v) {
  int n = geo.n;
  const point& p = geo.p;
  vec vp = v(p);
  mat jv = jacobian(m, v, p, geo.h);
  tensor3 hv = hessian(m, v, p, geo.h);
  tensor3 dv_gamma = derivative_along(
      m, [&](const point& q) { return geometry_at(m, q, geo.h, 1).gamma; }, p, vp, 2 * geo.h);
  tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        real t = dv_gamma(a, c, b) + hv(a, c, b);
        for (int e = 0; e < n; ++e)
          t += -geo.gamma(e, c, b) * jv(a, e) + jv(e, c) * geo.gamma(a, e, b) +
               jv(e, b) * geo.gamma(a, c, e);
        out(a, c, b) = t;
      }
  return out;
}

/// (L_V R)_{X,Y} Z = (nabla_X L_V nabla)(Y, Z) - (nabla_Y L_V nabla)(X, Z),
/// as T(a, b, c, d) with Z = e_b, X = e_c, Y = e_d (the layout of riem).
inline tensor4 lie_derivative_curvature(const charted_manifold& m, const nested_geometry& ng,
                                        const vector_field& v) {
  auto lie_conn = [&](const local_geometry& g) { return lie_derivative_connection(m, g, v); };
  tensor3 l = lie_conn(ng.center);
  auto dl = ng.partials(lie_conn);
  auto nl = ng.center.covariant_12(l, dl);
  int n = ng.center.n;
  tensor4 out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(a, b, c, d) = nl[c](a, d, b) - nl[d](a, c, b);
  return out;
}

/// Components (L_V omega)_b = V^c d_c omega_b + omega_c d_b V^c.
inline vec lie_derivative_covector(const charted_manifold& m, const vector_field& v,
                                   const covector_field& w, const point& p, real h) {
  vec out = derivative_along(m, w, p, v(p), h);
  out += jacobian(m, v, p, h).transpose() * w(p);
  return out;
}

// --- exterior derivatives -----------------------------------------------------

/// d omega(X, Y) = 1/2 {X(omega(Y)) - Y(omega(X)) - omega([X, Y])}.
inline real exterior_derivative_1form(const charted_manifold& m, const covector_field& w,
                                      const vector_field& x, const vector_field& y, const point& p,
                                      real h) {
  auto wy = [&](const point& q) { return w(q).dot(y(q)); };
  auto wx = [&](const point& q) { return w(q).dot(x(q)); };
  real t = derivative_along(m, wy, p, x(p), h) - derivative_along(m, wx, p, y(p), h) -
           w(p).dot(lie_bracket(m, x, y, p, h));
  return t / 2;
}

/// d Phi(X, Y, Z) from the co-boundary formula 3 dPhi = X Phi(Y,Z) + ... - Phi([X,Y],Z) - ...
inline real exterior_derivative_2form(const charted_manifold& m, const form2_field& phi,
                                      const vector_field& x, const vector_field& y,
                                      const vector_field& z, const point& p, real h) {
  auto eval = [&](const vector_field& u, const vector_field& w) {
    return [&, u, w](const point& q) { return u(q).dot(phi(q) * w(q)); };
  };
  mat f = phi(p);
  real t = derivative_along(m, eval(y, z), p, x(p), h) + derivative_along(m, eval(z, x), p, y(p), h) +
           derivative_along(m, eval(x, y), p, z(p), h);
  t -= lie_bracket(m, x, y, p, h).dot(f * z(p));
  t -= lie_bracket(m, z, x, p, h).dot(f * y(p));
  t -= lie_bracket(m, y, z, p, h).dot(f * x(p));
  return t / 3;
}

// --- Nijenhuis torsion -----------------------------------------------------

inline vector_field transform_field(const tensor11_field& s, const vector_field& x) {
  return [s, x](const point& q) { return vec(s(q) * x(q)); };
}

/// [S,S](X,Y) = S^2[X,Y] + [SX,SY] - S[SX,Y] - S[X,SY].
inline vec nijenhuis(const charted_manifold& m, const tensor11_field& s, const vector_field& x,
                     const vector_field& y, const point& p, real h) {
  mat sp = s(p);
  auto sx = transform_field(s, x);
  auto sy = transform_field(s, y);
  return sp * sp * lie_bracket(m, x, y, p, h) + lie_bracket(m, sx, sy, p, h) -
         sp * lie_bracket(m, sx, y, p, h) - sp * lie_bracket(m, x, sy, p, h);
}

/// Covariant form (S nabla_Y S - nabla_{SY} S) X - (S nabla_X S - nabla_{SX} S) Y.
inline vec nijenhuis_covariant(const charted_manifold& m, const local_geometry& geo,
                               const tensor11_field& s, const vec& x, const vec& y) {
  mat sp = s(geo.p);
  auto ns = geo.covariant_11(sp, partials(m, s, geo.p, geo.h));
  auto along = [&](const vec& u) {
    mat acc = mat::Zero(geo.n, geo.n);
    for (int c = 0; c < geo.n; ++c) acc += u[c] * ns[c];
    return acc;
  };
  return (sp * along(y) - along(sp * y)) * x - (sp * along(x) - along(sp * x)) * y;
}

}  // namespace kenlab
