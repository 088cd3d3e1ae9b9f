#pragma once

// Curvature identities of weak beta-Kenmotsu f-manifolds with constant beta:
// R(X,Y)xi_i, Ric^sharp xi_i, nabla Ric^sharp, xi_i(r), the Lie derivative
// chain along xi_i, the eta-Einstein fit and the nabla_{xi} Ric^sharp = 0 theorem.

#include "kenlab/fstructure.hpp"

#include <string>
#include <vector>

namespace kenlab {

using dmat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using dvec = Eigen::Matrix<real, Eigen::Dynamic, 1>;

inline void require_constant_beta(const weak_f_structure& st, const std::string& what) {
  if (!st.beta_constant)
    throw error(error_kind::gated, what + " is stated for constant beta only");
}

// --- closed forms -------------------------------------------------------------

inline real predicted_scalar_curvature(int n, int s, real beta) {
  return -2 * real(s) * n * (2 * n + 1) * beta * beta;
}
inline real predicted_a(int n, int s, real beta) { return -2 * real(s) * n * beta * beta; }
inline real predicted_b(int n, int s, real beta) { return 2 * real(s - 1) * n * beta * beta; }

/// s(X - eta^j(X) xi_j) + etabar(X) xibar as a matrix acting on X.
inline mat kenmotsu_block(const weak_f_structure& st, const point& p) {
  int n = st.dim();
  mat proj = mat::Identity(n, n) - st.vertical_projector(p);
  return st.s * proj + st.xibar(p) * st.etabar(p).transpose();
}

/// Ric^sharp = -2 n beta^2 {s(X - eta^j(X) xi_j) + etabar(X) xibar}.
inline mat closed_ricci_operator(const weak_f_structure& st, const point& p, real beta) {
  return -2 * real(st.n) * beta * beta * kenmotsu_block(st, p);
}

/// beta^2 {etabar(X) Y - etabar(Y) X + (etabar(Y) eta^p(X) - etabar(X) eta^p(Y)) xi_p}.
inline vec curvature_xi_rhs(const weak_f_structure& st, const point& p, real beta, const vec& x,
                            const vec& y) {
  vec eb = st.etabar(p);
  mat vp = st.vertical_projector(p);
  return beta * beta * (eb.dot(x) * y - eb.dot(y) * x + eb.dot(y) * (vp * x) - eb.dot(x) * (vp * y));
}

/// (nabla_{xi_i} Ric^sharp) X = -2 beta Ric^sharp X - 4 n beta^3 {s(X - eta^j(X) xi_j) + etabar(X) xibar}.
inline mat nabla_xi_ricci_rhs(const weak_f_structure& st, const point& p, real beta,
                              const mat& ric_sharp) {
  return -2 * beta * ric_sharp - 4 * real(st.n) * beta * beta * beta * kenmotsu_block(st, p);
}

/// (nabla_X Ric^sharp) xi_i = -beta Ric^sharp X - 2 s n beta^3 X + 2 n beta^3 (s eta^j(X) xi_j - etabar(X) xibar).
inline mat nabla_ricci_xi_rhs(const weak_f_structure& st, const point& p, real beta,
                              const mat& ric_sharp) {
  int dim = st.dim();
  real b3 = beta * beta * beta;
  return -beta * ric_sharp - 2 * real(st.s) * st.n * b3 * mat::Identity(dim, dim) +
         2 * real(st.n) * b3 * (st.s * st.vertical_projector(p) - st.xibar(p) * st.etabar(p).transpose());
}

/// g(Y,Z) - sum_j eta^j(Y) eta^j(Z) as a bilinear form.
inline mat horizontal_form(const weak_f_structure& st, const point& p, const mat& g) {
  return g - st.eta_eta(p);
}

/// (L_{xi_i} R)_{X,Y} Z = 2 beta^3 {h(X,Z)(etabar(Y) xibar + s Y_D) - h(Y,Z)(etabar(X) xibar + s X_D)},
/// with h the horizontal form and X_D = X - eta^q(X) xi_q.
inline vec lie_xi_curvature_rhs(const weak_f_structure& st, const point& p, real beta, const mat& g,
                                const vec& x, const vec& y, const vec& z) {
  mat hf = horizontal_form(st, p, g);
  mat blk = mat(st.xibar(p) * st.etabar(p).transpose()) +
            real(st.s) * (mat::Identity(st.dim(), st.dim()) - st.vertical_projector(p));
  return 2 * beta * beta * beta * (x.dot(hf * z) * (blk * y) - y.dot(hf * z) * (blk * x));
}

// --- Lie derivatives of (1,1) and (0,2) tensors along V ------------------------

/// (L_V S) = V^c d_c S - (dV) S + S (dV).
inline mat lie_derivative_11(const mat& s, const std::vector<mat>& ds, const vec& v, const mat& jv) {
  mat out = -jv * s + s * jv;
  for (std::size_t c = 0; c < ds.size(); ++c) out += v[c] * ds[c];
  return out;
}

/// (L_V T) = V^c d_c T + (dV)^T T + T (dV).
inline mat lie_derivative_02(const mat& t, const std::vector<mat>& dt, const vec& v, const mat& jv) {
  mat out = jv.transpose() * t + t * jv;
  for (std::size_t c = 0; c < dt.size(); ++c) out += v[c] * dt[c];
  return out;
}

/// Contraction over X of a curvature-like array: C(Y,Z) = trace(X -> T_{X,Y} Z),
/// returned as C(d, b) with Y = e_d, Z = e_b.
inline mat ricci_contraction(const tensor4& t) {
  int n = t.dim();
  mat out = mat::Zero(n, n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) out(d, b) += t(a, b, a, d);
  return out;
}

// --- suites -------------------------------------------------------------------

namespace detail {

inline real beta_at(const weak_f_structure& st, const point& p) { return st.beta(p); }

inline std::vector<vec> pool_values(const std::vector<vector_field>& pool, const point& p) {
  std::vector<vec> out;
  for (const auto& v : pool) out.push_back(v(p));
  return out;
}

}  // namespace detail

/// R_{X,Y} xi_i against its closed form over probe pairs, plus flatness of span(xi_i).
inline residual_list check_curvature_xi(const weak_f_structure& st, const sample_plan& plan,
                                        const tolerances& tol, real h) {
  require_constant_beta(st, "R(X,Y) xi_i");
  residual_accumulator rxi("curvature.r_xi",
                           "R(X,Y) xi_i - beta^2{etabar(X)Y - etabar(Y)X + (etabar(Y)eta^p(X) - "
                           "etabar(X)eta^p(Y)) xi_p}",
                           tol.d2);
  residual_accumulator flat("curvature.vertical_flat", "R(xi_i, xi_j) xi_k = 0", tol.d2);
  residual_accumulator anti("curvature.antisymmetry", "R(X,Y)Z + R(Y,X)Z", tol.id,
                            comparison::below, residual_category::engine);
  residual_accumulator bianchi("curvature.first_bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y", tol.d2,
                               comparison::below, residual_category::engine);
  auto pool = probe_pool(st, plan);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h);
    real beta = detail::beta_at(st, p);
    auto v = detail::pool_values(pool, p);
    for (const auto& x : v)
      for (const auto& y : v) {
        vec rhs = curvature_xi_rhs(st, p, beta, x, y);
        for (int i = 0; i < st.s; ++i) rxi.add(geo.riemann(x, y, st.xi[i](p)) - rhs, p);
        for (const auto& z : v) {
          anti.add(geo.riemann(x, y, z) + geo.riemann(y, x, z), p);
          bianchi.add(geo.riemann(x, y, z) + geo.riemann(y, z, x) + geo.riemann(z, x, y), p);
        }
      }
    for (int i = 0; i < st.s; ++i)
      for (int j = 0; j < st.s; ++j)
        for (int k = 0; k < st.s; ++k)
          flat.add(geo.riemann(st.xi[i](p), st.xi[j](p), st.xi[k](p)), p);
  }
  return {rxi.finish(), flat.finish(), anti.finish(), bianchi.finish()};
}

/// Ric^sharp xi_i = -2 n beta^2 xibar, and Ric(xi_i, xi_j) = -2 n beta^2.
inline residual_list check_ricci_xi(const weak_f_structure& st, const sample_plan& plan,
                                    const tolerances& tol, real h) {
  require_constant_beta(st, "Ric^sharp xi_i");
  residual_accumulator op("curvature.ricci_xi", "Ric^sharp xi_i + 2 n beta^2 xibar", tol.d2);
  residual_accumulator pair("curvature.ricci_xi_xi", "Ric(xi_i, xi_j) + 2 n beta^2", tol.d2);
  residual_accumulator sym("curvature.ricci_symmetric", "Ric(X,Y) - Ric(Y,X)", tol.d2,
                           comparison::below, residual_category::engine);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h);
    real beta = detail::beta_at(st, p);
    vec xb = st.xibar(p);
    for (int i = 0; i < st.s; ++i) {
      vec xi = st.xi[i](p);
      op.add(geo.ric_sharp * xi + 2 * real(st.n) * beta * beta * xb, p);
      for (int j = 0; j < st.s; ++j) pair.add(xi.dot(geo.ric * st.xi[j](p)) + 2 * real(st.n) * beta * beta, p);
    }
    sym.add(geo.ric - geo.ric.transpose(), p);
  }
  return {op.finish(), pair.finish(), sym.finish()};
}

/// (nabla_{xi_i} Ric^sharp) X and (nabla_X Ric^sharp) xi_i against their closed forms.
inline residual_list check_nabla_ricci(const weak_f_structure& st, const sample_plan& plan,
                                       const tolerances& tol, real h) {
  require_constant_beta(st, "nabla Ric^sharp");
  residual_accumulator along("curvature.nabla_xi_ricci",
                             "(nabla_{xi_i} Ric^sharp)X + 2 beta Ric^sharp X + 4 n beta^3 "
                             "{s(X - eta^j(X) xi_j) + etabar(X) xibar}",
                             tol.d3);
  residual_accumulator on("curvature.nabla_ricci_xi",
                          "(nabla_X Ric^sharp) xi_i + beta Ric^sharp X + 2 s n beta^3 X - 2 n beta^3 "
                          "(s eta^j(X) xi_j - etabar(X) xibar)",
                          tol.d3);
  auto pool = probe_pool(st, plan);
  for (const auto& p : plan.points) {
    auto ng = nested_geometry_at(st.m, p, h);
    const auto& geo = ng.center;
    real beta = detail::beta_at(st, p);
    auto nr = nabla_ricci_operator(ng);
    mat rhs_along = nabla_xi_ricci_rhs(st, p, beta, geo.ric_sharp);
    mat rhs_on = nabla_ricci_xi_rhs(st, p, beta, geo.ric_sharp);
    auto v = detail::pool_values(pool, p);
    for (int i = 0; i < st.s; ++i) {
      vec xi = st.xi[i](p);
      mat nxi = mat::Zero(geo.n, geo.n);
      for (int c = 0; c < geo.n; ++c) nxi += xi[c] * nr[c];
      for (const auto& x : v) {
        along.add(nxi * x - rhs_along * x, p);
        vec lhs = vec::Zero(geo.n);
        for (int c = 0; c < geo.n; ++c) lhs += x[c] * (nr[c] * xi);
        on.add(lhs - rhs_on * x, p);
      }
    }
  }
  return {along.finish(), on.finish()};
}

/// xi_i(r) = -2 beta {r + 2 s n (2n+1) beta^2}, xi_i(r) by differencing r.
inline residual_list check_scalar_derivative(const weak_f_structure& st, const sample_plan& plan,
                                             const tolerances& tol, real h) {
  require_constant_beta(st, "xi_i(r)");
  residual_accumulator acc("curvature.xi_scalar",
                           "xi_i(r) + 2 beta {r + 2 s n (2n+1) beta^2}", tol.d3);
  for (const auto& p : plan.points) {
    real beta = detail::beta_at(st, p);
    // r along t-directions only needs the nested layer in those coordinates,
    // but the full gradient keeps the route uniform
    auto ng = nested_geometry_at(st.m, p, h);
    vec grad = scalar_gradient(ng);
    real r = ng.center.scalar;
    for (int i = 0; i < st.s; ++i) {
      real lhs = grad.dot(st.xi[i](p));
      acc.add(lhs + 2 * beta * (r - predicted_scalar_curvature(st.n, st.s, beta)), p);
    }
  }
  return {acc.finish()};
}

/// Lie derivatives along xi_i of g, nabla, R, Ric and Ric^sharp against their
/// closed forms, with two-route agreement checks for L nabla and L Ric^sharp.
inline residual_list lie_xi_suite(const weak_f_structure& st, const sample_plan& plan,
                                  const tolerances& tol, real h) {
  require_constant_beta(st, "the Lie derivative chain along xi_i");
  residual_accumulator lg("lie_xi.metric", "(L_{xi_i} g)(Y,Z) - 2 beta{g(Y,Z) - sum_j eta^j(Y) eta^j(Z)}",
                          tol.d1);
  residual_accumulator lc("lie_xi.connection",
                          "(L_{xi_i} nabla)(Y,Z) - 2 beta^2{sum_j eta^j(Y) eta^j(Z) - g(Y,Z)} xibar",
                          tol.d2);
  residual_accumulator lroutes("lie_xi.connection_routes",
                               "L_{xi_i} nabla: second covariant route minus transport route", tol.d2,
                               comparison::below, residual_category::engine);
  residual_accumulator lr("lie_xi.curvature", "(L_{xi_i} R)_{X,Y} Z against its closed form", tol.d3);
  residual_accumulator lric("lie_xi.ricci",
                            "(L_{xi_i} Ric)(Y,Z) + 4 s n beta^3 {g(Y,Z) - sum_j eta^j(Y) eta^j(Z)}",
                            tol.d3);
  residual_accumulator lricr("lie_xi.ricci_routes",
                             "L_{xi_i} Ric: contraction of L R minus direct Lie derivative", tol.d3,
                             comparison::below, residual_category::engine);
  residual_accumulator lsharp("lie_xi.ricci_operator",
                              "(L_{xi_i} Ric^sharp)Y + 2 beta Ric^sharp Y + 4 n beta^3 "
                              "{s(Y - eta^j(Y) xi_j) + etabar(Y) xibar}",
                              tol.d3);
  residual_accumulator lsroutes("lie_xi.ricci_operator_routes",
                                "L_{xi_i} Ric^sharp: direct minus (L Ric - (L g) Ric^sharp) route",
                                tol.d3, comparison::below, residual_category::engine);
  residual_accumulator ident("lie_xi.equals_nabla", "(L_{xi_i} Ric^sharp)Y - (nabla_{xi_i} Ric^sharp)Y",
                             tol.d3);
  auto pool = probe_pool(st, plan);
  for (const auto& p : plan.points) {
    auto ng = nested_geometry_at(st.m, p, h);
    const auto& geo = ng.center;
    const int n = geo.n;
    real beta = detail::beta_at(st, p);
    mat hf = horizontal_form(st, p, geo.g);
    mat ee = st.eta_eta(p);
    vec xb = st.xibar(p);
    auto v = detail::pool_values(pool, p);
    auto dric = ng.partials([](const local_geometry& g) { return mat(g.ric); });
    auto dsharp = ng.partials([](const local_geometry& g) { return mat(g.ric_sharp); });
    auto nr = nabla_ricci_operator(ng);
    mat sharp_rhs = nabla_xi_ricci_rhs(st, p, beta, geo.ric_sharp);
    for (int i = 0; i < st.s; ++i) {
      const auto& xf = st.xi[i];
      vec xi = xf(p);
      mat jx = jacobian(st.m, xf, p, h);
      mat lgm = lie_derivative_metric(geo, xi, jx);
      lg.add(lgm - 2 * beta * hf, p);

      tensor3 lcn = lie_derivative_connection(geo, xi, jx, hessian(st.m, xf, p, h));
      lroutes.add((lcn - lie_derivative_connection_transport(st.m, geo, xf)).max_abs(), p);
      for (const auto& y : v)
        for (const auto& z : v)
          lc.add(contract(lcn, y, z) - 2 * beta * beta * (y.dot(ee * z) - y.dot(geo.g * z)) * xb, p);

      tensor4 lrt = lie_derivative_curvature(st.m, ng, xf);
      for (const auto& x : v)
        for (const auto& y : v)
          for (const auto& z : v)
            lr.add(contract(lrt, x, y, z) - lie_xi_curvature_rhs(st, p, beta, geo.g, x, y, z), p);

      mat lric_c = ricci_contraction(lrt);
      mat lric_d = lie_derivative_02(geo.ric, dric, xi, jx);
      lricr.add(lric_c - lric_d, p);
      lric.add(lric_c + 4 * real(st.s) * st.n * beta * beta * beta * hf, p);

      mat lsharp_d = lie_derivative_11(geo.ric_sharp, dsharp, xi, jx);
      mat lsharp_r = geo.ginv * (lric_c - lgm * geo.ric_sharp);
      lsroutes.add(lsharp_d - lsharp_r, p);
      lsharp.add(lsharp_d - sharp_rhs, p);
      mat nxi = mat::Zero(n, n);
      for (int c = 0; c < n; ++c) nxi += xi[c] * nr[c];
      ident.add(lsharp_d - nxi, p);
    }
  }
  return {lg.finish(),  lc.finish(),   lroutes.finish(),  lr.finish(),   lric.finish(),
          lricr.finish(), lsharp.finish(), lsroutes.finish(), ident.finish()};
}

// --- eta-Einstein fit ---------------------------------------------------------

struct eta_einstein_fit {
  real a = 0, b = 0;
  real residual = 0;  // max |Ric(X,Y) - fitted form| over points and probe pairs
  real scalar_r = 0;  // mean scalar curvature over the sample points
  int rows = 0;
};

/// Ric = a (g + sum_{i!=j} eta^i eta^j) + b etabar (x) etabar, least squares over
/// all ordered probe pairs at all sample points.
inline eta_einstein_fit fit_eta_einstein(const weak_f_structure& st, const sample_plan& plan,
                                         const std::vector<local_geometry>& geos) {
  auto pool = probe_pool(st, plan);
  const std::size_t k = pool.size();
  const std::size_t rows = plan.points.size() * k * k;
  dmat a(rows, 2);
  dvec y(rows);
  std::size_t row = 0;
  real rsum = 0;
  for (std::size_t t = 0; t < plan.points.size(); ++t) {
    const auto& p = plan.points[t];
    const auto& geo = geos[t];
    vec eb = st.etabar(p);
    mat cross = eb * eb.transpose() - st.eta_eta(p);  // sum_{i!=j} eta^i eta^j
    mat c1 = geo.g + cross;
    mat c2 = eb * eb.transpose();
    auto v = detail::pool_values(pool, p);
    for (const auto& x : v)
      for (const auto& z : v) {
        a(row, 0) = x.dot(c1 * z);
        a(row, 1) = x.dot(c2 * z);
        y[row] = x.dot(geo.ric * z);
        ++row;
      }
    rsum += geo.scalar;
  }
  Eigen::ColPivHouseholderQR<dmat> qr(a);
  qr.setThreshold(1e-10L);
  if (qr.rank() < 2)
    throw error(error_kind::underdetermined, "underdetermined fit: eta-Einstein columns are dependent on the probe pool");
  dvec sol = qr.solve(y);
  eta_einstein_fit fit;
  fit.a = sol[0];
  fit.b = sol[1];
  fit.residual = max_abs(dvec(a * sol - y));
  fit.scalar_r = rsum / real(plan.points.size());
  fit.rows = static_cast<int>(rows);
  return fit;
}

inline std::vector<local_geometry> local_geometries(const weak_f_structure& st, const sample_plan& plan,
                                                    real h) {
  std::vector<local_geometry> out;
  for (const auto& p : plan.points) out.push_back(geometry_at(st.m, p, h));
  return out;
}

/// Fit plus its consistency residuals: the trace identity, a + b = -2 n beta^2 and
/// the operator form Ric^sharp X = (s beta^2 + r/2n) X - ((2n+s) beta^2 + r/2n) eta^j(X) xi_j
/// - 2 n beta^2 sum_{i!=j} eta^i(X) xi_j.
inline theorem_check eta_einstein_check(const weak_f_structure& st, const sample_plan& plan,
                                        const tolerances& tol, real h) {
  require_constant_beta(st, "the eta-Einstein form");
  theorem_check out;
  out.name = "eta_einstein";
  auto geos = local_geometries(st, plan, h);
  auto fit = fit_eta_einstein(st, plan, geos);
  real beta = st.beta(plan.points.front());
  const int n = st.n, s = st.s;
  residual_accumulator fitres("eta_einstein.fit", "Ric(X,Y) - a(g + sum_{i!=j} eta^i eta^j) - b etabar etabar",
                              tol.d2);
  residual_accumulator trace("eta_einstein.trace", "r - ((2n+s) a + s b)", tol.d2);
  residual_accumulator sum("eta_einstein.a_plus_b", "a + b + 2 n beta^2", tol.d2);
  residual_accumulator form("eta_einstein.operator_form", "Ric^sharp against the form in terms of r",
                            tol.d2);
  fitres.add(fit.residual, plan.points.front());
  sum.add(fit.a + fit.b + 2 * real(n) * beta * beta, plan.points.front());
  for (std::size_t t = 0; t < plan.points.size(); ++t) {
    const auto& p = plan.points[t];
    const auto& geo = geos[t];
    trace.add(geo.scalar - ((2 * n + s) * fit.a + s * fit.b), p);
    real r = geo.scalar;
    mat vp = st.vertical_projector(p);
    mat cross = st.xibar(p) * st.etabar(p).transpose() - vp;  // X -> sum_{i!=j} eta^i(X) xi_j
    mat expect = (s * beta * beta + r / (2 * n)) * mat::Identity(geo.n, geo.n) -
                 ((2 * n + s) * beta * beta + r / (2 * n)) * vp - 2 * real(n) * beta * beta * cross;
    form.add(geo.ric_sharp - expect, p);
  }
  out.conclusions = {fitres.finish(), trace.finish(), sum.finish()};
  // the operator form is asserted only when the fit itself passes
  if (out.conclusions.front().pass) out.conclusions.push_back(form.finish());
  out.constants = {make_constant("a", fit.a, predicted_a(n, s, beta), tol.d2),
                   make_constant("b", fit.b, predicted_b(n, s, beta), tol.d2),
                   make_constant("r", fit.scalar_r, predicted_scalar_curvature(n, s, beta), tol.d2)};
  return out;
}

/// Theorem: constant beta and nabla_{xi_i} Ric^sharp = 0 give the eta-Einstein
/// form with a = -2 s n beta^2, b = 2(s-1) n beta^2, r = -2 s n (2n+1) beta^2.
inline theorem_check xi_parallel_ricci_verify(const weak_f_structure& st, const sample_plan& plan,
                                              const tolerances& tol, real h) {
  require_constant_beta(st, "the parallel-Ricci theorem");
  theorem_check out;
  out.name = "xi_parallel_ricci";
  residual_accumulator hyp("xi_parallel_ricci.hypothesis", "nabla_{xi_i} Ric^sharp = 0", tol.d3,
                           comparison::below, residual_category::hypothesis);
  std::vector<local_geometry> geos;
  for (const auto& p : plan.points) {
    auto ng = nested_geometry_at(st.m, p, h);
    auto nr = nabla_ricci_operator(ng);
    for (int i = 0; i < st.s; ++i) {
      vec xi = st.xi[i](p);
      mat nxi = mat::Zero(ng.center.n, ng.center.n);
      for (int c = 0; c < ng.center.n; ++c) nxi += xi[c] * nr[c];
      hyp.add(nxi, p);
    }
    geos.push_back(std::move(ng.center));
  }
  out.hypotheses = {hyp.finish()};
  if (!out.hypotheses.front().pass) {
    out.applicable = false;
    out.note = "hypothesis nabla_{xi_i} Ric^sharp = 0 not met; conclusion not asserted";
    return out;
  }
  real beta = st.beta(plan.points.front());
  const int n = st.n, s = st.s;
  residual_accumulator form("xi_parallel_ricci.ricci_form",
                            "Ric^sharp + 2 n beta^2 {s(Y - eta^j(Y) xi_j) + etabar(Y) xibar}", tol.d2);
  residual_accumulator scal("xi_parallel_ricci.scalar", "r + 2 s n (2n+1) beta^2", tol.d2);
  for (std::size_t t = 0; t < plan.points.size(); ++t) {
    const auto& p = plan.points[t];
    form.add(geos[t].ric_sharp - closed_ricci_operator(st, p, beta), p);
    scal.add(geos[t].scalar - predicted_scalar_curvature(n, s, beta), p);
  }
  auto fit = fit_eta_einstein(st, plan, geos);
  residual_accumulator fitres("xi_parallel_ricci.eta_einstein",
                              "Ric(X,Y) - a(g + sum_{i!=j} eta^i eta^j) - b etabar etabar", tol.d2);
  fitres.add(fit.residual, plan.points.front());
  out.conclusions = {form.finish(), scal.finish(), fitres.finish()};
  out.constants = {make_constant("a", fit.a, predicted_a(n, s, beta), tol.d2),
                   make_constant("b", fit.b, predicted_b(n, s, beta), tol.d2),
                   make_constant("r", fit.scalar_r, predicted_scalar_curvature(n, s, beta), tol.d2)};
  return out;
}

/// All curvature residual suites in report order.
inline residual_list curvature_suite(const weak_f_structure& st, const sample_plan& plan,
                                     const tolerances& tol, real h) {
  residual_list out = check_curvature_xi(st, plan, tol, h);
  append(out, check_ricci_xi(st, plan, tol, h));
  append(out, check_nabla_ricci(st, plan, tol, h));
  append(out, check_scalar_derivative(st, plan, tol, h));
  append(out, lie_xi_suite(st, plan, tol, h));
  return out;
}

}  // namespace kenlab
