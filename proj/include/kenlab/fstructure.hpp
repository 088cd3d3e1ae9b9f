#pragma once

// Weak metric f-structures (f, Q, xi_i, eta^i, g) and their residual suites.

#include "kenlab/geometry.hpp"
#include "kenlab/residual.hpp"

#include <string>
#include <vector>

namespace kenlab {

struct weak_f_structure {
  charted_manifold m;
  int n = 0;  // fiber half-dimension
  int s = 0;  // number of characteristic fields
  tensor11_field f;
  tensor11_field q;
  std::vector<vector_field> xi;
  std::vector<covector_field> eta;
  scalar_field beta;
  bool beta_constant = false;

  int dim() const { return m.dim(); }

  vec xibar(const point& p) const {
    vec out = vec::Zero(dim());
    for (const auto& x : xi) out += x(p);
    return out;
  }
  vec etabar(const point& p) const {
    vec out = vec::Zero(dim());
    for (const auto& e : eta) out += e(p);
    return out;
  }
  /// Q~ = Q - id; vanishes in the classical case.
  mat qtilde(const point& p) const { return q(p) - mat::Identity(dim(), dim()); }
  /// Fundamental 2-form Phi(X, Y) = g(X, fY), as the matrix g f.
  mat phi(const point& p) const { return m.metric_at(p) * f(p); }
  /// sum_i eta^i (x) xi_i as a matrix: X -> eta^i(X) xi_i.
  mat vertical_projector(const point& p) const {
    mat out = mat::Zero(dim(), dim());
    for (int i = 0; i < s; ++i) out += xi[i](p) * eta[i](p).transpose();
    return out;
  }
  /// sum_i eta^i (x) eta^i as a bilinear form.
  mat eta_eta(const point& p) const {
    mat out = mat::Zero(dim(), dim());
    for (int i = 0; i < s; ++i) out += eta[i](p) * eta[i](p).transpose();
    return out;
  }

  vector_field xibar_field() const {
    auto self = *this;
    return [self](const point& p) { return self.xibar(p); };
  }
  covector_field etabar_field() const {
    auto self = *this;
    return [self](const point& p) { return self.etabar(p); };
  }
  form2_field phi_field() const {
    auto self = *this;
    return [self](const point& p) { return self.phi(p); };
  }
  tensor11_field qtilde_field() const {
    auto self = *this;
    return [self](const point& p) { return self.qtilde(p); };
  }
};

inline void check_dimensions(const weak_f_structure& st) {
  if (st.n < 1 || st.s < 1)
    throw error(error_kind::config, "n and s must be positive");
  if (st.dim() != 2 * st.n + st.s)
    throw error(error_kind::config, "chart dimension " + std::to_string(st.dim()) + " is not 2n+s = " +
                                        std::to_string(2 * st.n + st.s));
  if (static_cast<int>(st.xi.size()) != st.s || static_cast<int>(st.eta.size()) != st.s)
    throw error(error_kind::config, "need exactly s characteristic fields and 1-forms");
}

/// D-component X - eta^i(X) xi_i of a field.
inline vector_field project_to_d(const weak_f_structure& st, const vector_field& x) {
  auto self = st;
  return [self, x](const point& p) { return vec(x(p) - self.vertical_projector(p) * x(p)); };
}

/// The probe pool: the three seeded polynomial fields and the s characteristic fields.
inline std::vector<vector_field> probe_pool(const weak_f_structure& st, const sample_plan& plan) {
  std::vector<vector_field> pool;
  for (int k = 0; k < 3; ++k) pool.push_back(plan.probe(k));
  for (const auto& x : st.xi) pool.push_back(x);
  return pool;
}

/// Numerical rank: singular values above 1e-8 * largest.
inline int numerical_rank(const mat& a) {
  Eigen::JacobiSVD<mat> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv[k] > 1e-8L * sv[0]) ++r;
  return r;
}

// --- algebraic axioms ---------------------------------------------------------

inline residual_list validate_framed(const weak_f_structure& st, const sample_plan& plan,
                                     const tolerances& tol) {
  check_dimensions(st);
  const int s = st.s;
  residual_accumulator cube("framed.f_cubed", "f^3 + f Q = 0", tol.id);
  residual_accumulator square("framed.f_squared", "f^2 = -Q + eta^i (x) xi_i", tol.id);
  residual_accumulator dual("framed.eta_xi", "eta^i(xi_j) = delta^i_j", tol.id);
  residual_accumulator qxi("framed.q_xi", "Q xi_i = xi_i", tol.id);
  residual_accumulator fxi("framed.f_xi", "f xi_i = 0", tol.id);
  residual_accumulator etaf("framed.eta_f", "eta^i o f = 0", tol.id);
  residual_accumulator etaq("framed.eta_q", "eta^i o Q = eta^i", tol.id);
  residual_accumulator comm("framed.q_f_commute", "[Q, f] = 0", tol.id);
  residual_accumulator rank("framed.rank_f", "|rank(f) - 2n| (singular values above 1e-8 |f|)", 0.5L);
  residual_accumulator qreg("framed.q_nonsingular", "smallest singular value of Q", tol.id,
                            comparison::above);
  residual_accumulator beta("framed.beta_nonzero", "min |beta| over sample points", tol.id,
                            comparison::above, residual_category::hypothesis);
  for (const auto& p : plan.points) {
    mat f = st.f(p), q = st.q(p);
    cube.add(f * f * f + f * q, p);
    square.add(f * f + q - st.vertical_projector(p), p);
    for (int i = 0; i < s; ++i) {
      vec xi = st.xi[i](p), eta = st.eta[i](p);
      for (int j = 0; j < s; ++j) dual.add(eta.dot(st.xi[j](p)) - (i == j ? 1 : 0), p);
      qxi.add(q * xi - xi, p);
      fxi.add(f * xi, p);
      etaf.add(f.transpose() * eta, p);
      etaq.add(q.transpose() * eta - eta, p);
    }
    comm.add(q * f - f * q, p);
    rank.add(real(numerical_rank(f) - 2 * st.n), p);
    qreg.add(Eigen::JacobiSVD<mat>(q).singularValues().minCoeff(), p);
    beta.add(st.beta(p), p);
  }
  return {cube.finish(), square.finish(), dual.finish(), qxi.finish(), fxi.finish(), etaf.finish(),
          etaq.finish(), comm.finish(), rank.finish(), qreg.finish(), beta.finish()};
}

/// Compatibility of g with the framed structure, plus the metric consequences
/// (f skew, Q self-adjoint, eta^i = g(., xi_i)).
inline residual_list validate_compatible(const weak_f_structure& st, const sample_plan& plan,
                                         const tolerances& tol) {
  residual_accumulator compat("compatible.metric", "g(fX, fY) - g(X, QY) + sum_i eta^i(X) eta^i(Y)",
                              tol.id);
  residual_accumulator dual("compatible.eta_dual", "eta^i(X) - g(X, xi_i)", tol.id);
  residual_accumulator skew("compatible.f_skew", "g(fX, Y) + g(X, fY)", tol.id);
  residual_accumulator selfadj("compatible.q_self_adjoint", "g(QX, Y) - g(X, QY)", tol.id);
  residual_accumulator phi("compatible.phi_skew", "Phi(X, Y) + Phi(Y, X)", tol.id);
  for (const auto& p : plan.points) {
    mat g = st.m.metric_at(p), f = st.f(p), q = st.q(p);
    compat.add(f.transpose() * g * f - g * q + st.eta_eta(p), p);
    for (int i = 0; i < st.s; ++i) dual.add(st.eta[i](p) - g * st.xi[i](p), p);
    mat gf = g * f;
    skew.add(gf + gf.transpose(), p);
    mat gq = g * q;
    selfadj.add(gq - gq.transpose(), p);
    mat ph = st.phi(p);
    phi.add(ph + ph.transpose(), p);
  }
  return {compat.finish(), dual.finish(), skew.finish(), selfadj.finish(), phi.finish()};
}

// --- normality tensors ------------------------------------------------------------

struct normality_values {
  vec n1;                // N^(1)(X, Y)
  std::vector<real> n2;  // N^(2)_i(X, Y)
  std::vector<real> n2_expected;  // eta^i([Q~X, fY])
  std::vector<vec> n3;   // N^(3)_i(X)
  std::vector<real> n4;  // N^(4)_{ij}(X), index i * s + j
};

inline normality_values normality_tensors(const weak_f_structure& st, const point& p,
                                          const vector_field& x, const vector_field& y, real h) {
  const auto& m = st.m;
  normality_values out;
  out.n1 = nijenhuis(m, st.f, x, y, p, h);
  for (int i = 0; i < st.s; ++i)
    out.n1 += 2 * exterior_derivative_1form(m, st.eta[i], x, y, p, h) * st.xi[i](p);

  auto fx = transform_field(st.f, x), fy = transform_field(st.f, y);
  auto lie_eta = [&](const covector_field& w, const vector_field& v, const vector_field& u) {
    // (L_v w)(u) = v(w(u)) - w([v, u])
    auto wu = [&](const point& q) { return w(q).dot(u(q)); };
    return derivative_along(m, wu, p, v(p), h) - w(p).dot(lie_bracket(m, v, u, p, h));
  };
  auto qx = transform_field(st.qtilde_field(), x);
  vec qxfy = lie_bracket(m, qx, fy, p, h);
  for (int i = 0; i < st.s; ++i) {
    out.n2.push_back(lie_eta(st.eta[i], fx, y) - lie_eta(st.eta[i], fy, x));
    out.n2_expected.push_back(st.eta[i](p).dot(qxfy));
    out.n3.push_back(lie_bracket(m, st.xi[i], fx, p, h) - st.f(p) * lie_bracket(m, st.xi[i], x, p, h));
    for (int j = 0; j < st.s; ++j) out.n4.push_back(lie_eta(st.eta[j], st.xi[i], x));
  }
  return out;
}

/// N^(5)(X, Y, Z) from its defining display, with Q~ = Q - id.
inline real n5_tensor(const weak_f_structure& st, const point& p, const vector_field& x,
                      const vector_field& y, const vector_field& z, real h) {
  const auto& m = st.m;
  auto qt = st.qtilde_field();
  auto gq = [&](const vector_field& u, const vector_field& w) {
    return [&, u, w](const point& q) { return u(q).dot(m.metric_at(q) * (qt(q) * w(q))); };
  };
  mat g = m.metric_at(p), f = st.f(p), qp = qt(p);
  auto fy = transform_field(st.f, y), fz = transform_field(st.f, z);
  auto gip = [&](const vec& a, const vec& b) { return a.dot(g * b); };
  real t = derivative_along(m, gq(x, y), p, f * z(p), h) - derivative_along(m, gq(x, z), p, f * y(p), h);
  t += gip(lie_bracket(m, x, fz, p, h), qp * y(p));
  t -= gip(lie_bracket(m, x, fy, p, h), qp * z(p));
  vec w = lie_bracket(m, y, fz, p, h) - lie_bracket(m, z, fy, p, h) - f * lie_bracket(m, y, z, p, h);
  t += gip(w, qp * x(p));
  return t;
}

/// Bracket-form normality residuals over the probe pool.
inline residual_list normality_suite(const weak_f_structure& st, const sample_plan& plan,
                                     const tolerances& tol, real h) {
  residual_accumulator n1("normality.n1", "N^(1)(X,Y) = [f,f](X,Y) + 2 d eta^i(X,Y) xi_i", tol.d1);
  residual_accumulator n2("normality.n2", "N^(2)_i(X,Y) - eta^i([Q~X, fY]), Q~ = Q - id", tol.d1);
  residual_accumulator n3("normality.n3", "N^(3)_i(X) = [xi_i, fX] - f[xi_i, X]", tol.d1);
  residual_accumulator n4("normality.n4", "N^(4)_ij(X) = xi_i(eta^j(X)) - eta^j([xi_i, X])", tol.d1);
  auto pool = probe_pool(st, plan);
  for (const auto& p : plan.points) {
    for (std::size_t a = 0; a < pool.size(); ++a)
      for (std::size_t b = 0; b < pool.size(); ++b) {
        auto v = normality_tensors(st, p, pool[a], pool[b], h);
        n1.add(v.n1, p);
        for (int i = 0; i < st.s; ++i) n2.add(v.n2[i] - v.n2_expected[i], p);
        if (b == 0) {
          for (const auto& x : v.n3) n3.add(x, p);
          for (real x : v.n4) n4.add(x, p);
        }
      }
  }
  return {n1.finish(), n2.finish(), n3.finish(), n4.finish()};
}

// --- Kenmotsu condition ---------------------------------------------------------

/// (nabla_c f)^a_b at p.
inline std::vector<mat> nabla_f(const weak_f_structure& st, const local_geometry& geo) {
  return geo.covariant_11(st.f(geo.p), partials(st.m, st.f, geo.p, geo.h));
}

/// K(a, c, b): components of (nabla_X f)Y - beta{g(fX, Y) xibar - etabar(Y) fX}
/// with X = e_c, Y = e_b.
inline tensor3 kenmotsu_defect(const weak_f_structure& st, const local_geometry& geo) {
  const int n = geo.n;
  const point& p = geo.p;
  auto nf = nabla_f(st, geo);
  mat f = st.f(p);
  mat ftg = f.transpose() * geo.g;  // g(fX, Y) = X^T ftg Y
  vec xb = st.xibar(p), eb = st.etabar(p);
  real beta = st.beta(p);
  tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b)
        out(a, c, b) = nf[c](a, b) - beta * (ftg(c, b) * xb[a] - eb[b] * f(a, c));
  return out;
}

inline vec kenmotsu_defect(const weak_f_structure& st, const local_geometry& geo, const vec& x,
                           const vec& y) {
  return contract(kenmotsu_defect(st, geo), x, y);
}

/// Matrix of nabla_X xi_i - beta{X - eta^j(X) xi_j} (columns indexed by X = e_c).
inline mat xi_derivative_check(const weak_f_structure& st, const local_geometry& geo, int i) {
  const point& p = geo.p;
  mat nxi = geo.covariant_jacobian(st.xi[i](p), jacobian(st.m, st.xi[i], p, geo.h));
  mat id = mat::Identity(geo.n, geo.n);
  return nxi - st.beta(p) * (id - st.vertical_projector(p));
}

/// Matrix (c, b) of (nabla_c eta^i)_b - beta{g_cb - sum_j eta^j_c eta^j_b}.
inline mat eta_derivative_check(const weak_f_structure& st, const local_geometry& geo, int i) {
  const point& p = geo.p;
  auto ne = geo.covariant_covector(st.eta[i](p), partials(st.m, st.eta[i], p, geo.h));
  mat out(geo.n, geo.n);
  for (int c = 0; c < geo.n; ++c) out.row(c) = ne[c].transpose();
  return out - st.beta(p) * (geo.g - st.eta_eta(p));
}

inline residual_list kenmotsu_suite(const weak_f_structure& st, const sample_plan& plan,
                                    const tolerances& tol, real h) {
  residual_accumulator defect("kenmotsu.defect",
                              "(nabla_X f)Y - beta{g(fX,Y) xibar - etabar(Y) fX}", tol.d1);
  residual_accumulator nxi_f("kenmotsu.nabla_xi_f", "(nabla_{xi_j} f) = 0", tol.d1);
  residual_accumulator nxi("kenmotsu.nabla_xi", "nabla_X xi_i - beta{X - eta^j(X) xi_j}", tol.d1);
  residual_accumulator nxixi("kenmotsu.xi_geodesic", "nabla_{xi_i} xi_j = 0", tol.d1);
  residual_accumulator neta("kenmotsu.nabla_eta",
                            "(nabla_X eta^i)Y - beta{g(X,Y) - sum_j eta^j(X) eta^j(Y)}", tol.d1);
  residual_accumulator nsym("kenmotsu.nabla_eta_symmetric", "(nabla_X eta^i)Y - (nabla_Y eta^i)X",
                            tol.d1);
  residual_accumulator vgeod("kenmotsu.vertical_totally_geodesic",
                             "D-component of nabla_X Y + nabla_Y X for X, Y in span(xi_i)", tol.d1);
  residual_accumulator bracket_d("kenmotsu.bracket_in_d", "eta^j([X, xi_i]) for X in D", tol.d1);
  residual_accumulator phi_xi("kenmotsu.phi_xi", "Phi(xi_i, .) = 0", tol.id);
  residual_accumulator phi_rank("kenmotsu.phi_rank", "|rank(Phi) - 2n|", 0.5L);
  std::vector<vector_field> dprobes;
  for (int k = 0; k < 3; ++k) dprobes.push_back(project_to_d(st, plan.probe(k)));
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h, 1);
    defect.add(kenmotsu_defect(st, geo).max_abs(), p);
    auto nf = nabla_f(st, geo);
    mat proj = mat::Identity(geo.n, geo.n) - st.vertical_projector(p);
    for (int j = 0; j < st.s; ++j) {
      vec xj = st.xi[j](p);
      mat along = mat::Zero(geo.n, geo.n);
      for (int c = 0; c < geo.n; ++c) along += xj[c] * nf[c];
      nxi_f.add(along, p);
    }
    std::vector<mat> nxis;
    for (int i = 0; i < st.s; ++i) {
      nxi.add(xi_derivative_check(st, geo, i), p);
      mat ne = eta_derivative_check(st, geo, i);
      neta.add(ne, p);
      mat raw = ne + st.beta(p) * (geo.g - st.eta_eta(p));
      nsym.add(raw - raw.transpose(), p);
      nxis.push_back(geo.covariant_jacobian(st.xi[i](p), jacobian(st.m, st.xi[i], p, h)));
    }
    for (int i = 0; i < st.s; ++i)
      for (int j = 0; j < st.s; ++j) {
        vec v = nxis[j] * st.xi[i](p);  // nabla_{xi_i} xi_j
        nxixi.add(v, p);
        vec w = nxis[i] * st.xi[j](p);
        vgeod.add(proj * (v + w), p);
      }
    for (const auto& x : dprobes)
      for (int i = 0; i < st.s; ++i) {
        vec br = lie_bracket(st.m, x, st.xi[i], p, h);
        for (int j = 0; j < st.s; ++j) bracket_d.add(st.eta[j](p).dot(br), p);
      }
    mat ph = st.phi(p);
    for (int i = 0; i < st.s; ++i) phi_xi.add(ph.transpose() * st.xi[i](p), p);
    phi_rank.add(real(numerical_rank(ph) - 2 * st.n), p);
  }
  return {defect.finish(), nxi_f.finish(), nxi.finish(), nxixi.finish(), neta.finish(),
          nsym.finish(), vgeod.finish(), bracket_d.finish(), phi_xi.finish(), phi_rank.finish()};
}

/// 3 (etabar ^ Phi)(X, Y, Z) = etabar(X) Phi(Y,Z) + etabar(Y) Phi(Z,X) + etabar(Z) Phi(X,Y).
inline real etabar_wedge_phi(const weak_f_structure& st, const point& p, const vec& x, const vec& y,
                             const vec& z) {
  vec eb = st.etabar(p);
  mat ph = st.phi(p);
  return (eb.dot(x) * y.dot(ph * z) + eb.dot(y) * z.dot(ph * x) + eb.dot(z) * x.dot(ph * y)) / 3;
}

/// The four conditions characterizing weak beta-Kenmotsu structures among
/// metric weak f-structures: N^(1) = 0, d eta^i = 0, d Phi = 2 beta etabar ^ Phi,
/// N^(5)(X,Y,Z) = 2 beta etabar(X) g(fY, Q~Z).
inline residual_list kenmotsu_characterization_suite(const weak_f_structure& st,
                                                     const sample_plan& plan, const tolerances& tol,
                                                     real h) {
  residual_accumulator n1("characterization.n1", "N^(1)(X,Y) = 0", tol.d1);
  residual_accumulator deta("characterization.d_eta", "d eta^i(X,Y) = 0", tol.d1);
  residual_accumulator dphi("characterization.d_phi", "d Phi(X,Y,Z) - 2 beta (etabar ^ Phi)(X,Y,Z)",
                            tol.d1);
  residual_accumulator n5("characterization.n5", "N^(5)(X,Y,Z) - 2 beta etabar(X) g(fY, Q~Z)", tol.d1);
  auto pool = probe_pool(st, plan);
  auto phi = st.phi_field();
  const std::size_t k = pool.size();
  for (const auto& p : plan.points) {
    mat g = st.m.metric_at(p), f = st.f(p), qt = st.qtilde(p);
    real beta = st.beta(p);
    vec eb = st.etabar(p);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        vec v = nijenhuis(st.m, st.f, pool[a], pool[b], p, h);
        for (int i = 0; i < st.s; ++i) {
          real d = exterior_derivative_1form(st.m, st.eta[i], pool[a], pool[b], p, h);
          v += 2 * d * st.xi[i](p);
          deta.add(d, p);
        }
        n1.add(v, p);
        for (std::size_t c = 0; c < k; ++c) {
          vec x = pool[a](p), y = pool[b](p), z = pool[c](p);
          real lhs = exterior_derivative_2form(st.m, phi, pool[a], pool[b], pool[c], p, h);
          dphi.add(lhs - 2 * beta * etabar_wedge_phi(st, p, x, y, z), p);
          real n5v = n5_tensor(st, p, pool[a], pool[b], pool[c], h);
          n5.add(n5v - 2 * beta * eb.dot(x) * (f * y).dot(g * (qt * z)), p);
        }
      }
  }
  return {n1.finish(), deta.finish(), dphi.finish(), n5.finish()};
}

}  // namespace kenlab
