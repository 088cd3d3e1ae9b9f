#pragma once

// eta-Ricci solitons 1/2 L_V g + Ric = lambda g + mu sum eta^i eta^i + (lambda+mu) sum_{i!=j} eta^i eta^j
// on weak beta-Kenmotsu f-manifolds: residuals, fits, and the lemma/theorem checks.

#include "kenlab/curvature_identities.hpp"
#include "kenlab/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kenlab {

struct soliton_spec {
  vector_field v;
  std::optional<expr> delta;  // V = delta * xibar
  std::optional<real> lambda, mu;  // absent means fit
  std::string description;
};

inline soliton_spec collinear_potential(const weak_f_structure& st, const expr& delta) {
  soliton_spec spec;
  auto self = st;
  spec.v = [self, delta](const point& p) { return vec(delta.evaluate(p) * self.xibar(p)); };
  spec.delta = delta;
  spec.description = "(" + delta.print() + ") * xibar";
  return spec;
}

inline soliton_spec component_potential(const std::vector<expr>& components) {
  soliton_spec spec;
  spec.v = [components](const point& p) {
    vec out(static_cast<Eigen::Index>(components.size()));
    for (std::size_t a = 0; a < components.size(); ++a) out[a] = components[a].evaluate(p);
    return out;
  };
  spec.description = "(";
  for (std::size_t a = 0; a < components.size(); ++a)
    spec.description += (a ? ", " : "") + components[a].print();
  spec.description += ")";
  return spec;
}

/// Columns of the soliton equation: lambda multiplies g + sum_{i!=j} eta^i eta^j,
/// mu multiplies etabar (x) etabar.
inline std::pair<mat, mat> soliton_columns(const weak_f_structure& st, const point& p, const mat& g) {
  vec eb = st.etabar(p);
  mat ebeb = eb * eb.transpose();
  return {g + ebeb - st.eta_eta(p), ebeb};
}

/// 1/2 (L_V g) + Ric - lambda g - mu sum_i eta^i eta^i - (lambda+mu) sum_{i!=j} eta^i eta^j.
inline mat soliton_residual(const weak_f_structure& st, const local_geometry& geo, const mat& lie_g,
                            real lambda, real mu) {
  auto [c1, c2] = soliton_columns(st, geo.p, geo.g);
  return lie_g / 2 + geo.ric - lambda * c1 - mu * c2;
}

inline real soliton_residual(const weak_f_structure& st, const soliton_spec& spec, real lambda, real mu,
                             const point& p, const vec& x, const vec& y, real h) {
  auto geo = geometry_at(st.m, p, h);
  mat lg = lie_derivative_metric(st.m, geo, spec.v);
  return x.dot(soliton_residual(st, geo, lg, lambda, mu) * y);
}

struct soliton_fit {
  real lambda = 0, mu = 0;
  real residual = 0;  // max pointwise |residual(X,Y)| over points and probe pairs
  bool fitted = false;
};

namespace detail {

struct soliton_point {
  local_geometry geo;
  mat lie_g;
};

inline std::vector<soliton_point> soliton_points(const weak_f_structure& st, const soliton_spec& spec,
                                                 const sample_plan& plan, real h) {
  std::vector<soliton_point> out;
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h);
    mat lg = lie_derivative_metric(st.m, geo, spec.v);
    out.push_back({std::move(geo), lg});
  }
  return out;
}

inline real max_pair_residual(const weak_f_structure& st, const sample_plan& plan,
                              const std::vector<soliton_point>& pts, real lambda, real mu) {
  auto pool = probe_pool(st, plan);
  real worst = 0;
  for (std::size_t t = 0; t < pts.size(); ++t) {
    mat e = soliton_residual(st, pts[t].geo, pts[t].lie_g, lambda, mu);
    for (const auto& xf : pool)
      for (const auto& yf : pool) {
        real v = xf(plan.points[t]).dot(e * yf(plan.points[t]));
        if (!std::isfinite(v)) return std::numeric_limits<real>::infinity();
        worst = std::max(worst, std::fabs(v));
      }
  }
  return worst;
}

}  // namespace detail

/// Least squares for constant (lambda, mu) over all ordered probe pairs at all points.
inline soliton_fit fit_soliton_constants(const weak_f_structure& st, const sample_plan& plan,
                                         const std::vector<detail::soliton_point>& pts) {
  auto pool = probe_pool(st, plan);
  const std::size_t k = pool.size();
  dmat a(pts.size() * k * k, 2);
  dvec y(a.rows());
  std::size_t row = 0;
  for (std::size_t t = 0; t < pts.size(); ++t) {
    const auto& p = plan.points[t];
    auto [c1, c2] = soliton_columns(st, p, pts[t].geo.g);
    mat target = pts[t].lie_g / 2 + pts[t].geo.ric;
    auto v = detail::pool_values(pool, p);
    for (const auto& x : v)
      for (const auto& z : v) {
        a(row, 0) = x.dot(c1 * z);
        a(row, 1) = x.dot(c2 * z);
        y[row] = x.dot(target * z);
        ++row;
      }
  }
  Eigen::ColPivHouseholderQR<dmat> qr(a);
  qr.setThreshold(1e-10L);
  if (qr.rank() < 2)
    throw error(error_kind::underdetermined, "underdetermined fit: soliton columns are dependent on the probe pool");
  dvec sol = qr.solve(y);
  soliton_fit fit;
  fit.lambda = sol[0];
  fit.mu = sol[1];
  fit.fitted = true;
  fit.residual = detail::max_pair_residual(st, plan, pts, fit.lambda, fit.mu);
  return fit;
}

inline soliton_fit fit_soliton_constants(const weak_f_structure& st, const soliton_spec& spec,
                                         const sample_plan& plan, real h) {
  return fit_soliton_constants(st, plan, detail::soliton_points(st, spec, plan, h));
}

/// Concrete (lambda, mu): declared values, or the fit when either is absent.
inline soliton_fit resolve_soliton(const weak_f_structure& st, const soliton_spec& spec,
                                   const sample_plan& plan, const std::vector<detail::soliton_point>& pts) {
  if (spec.lambda && spec.mu) {
    soliton_fit out;
    out.lambda = *spec.lambda;
    out.mu = *spec.mu;
    out.residual = detail::max_pair_residual(st, plan, pts, out.lambda, out.mu);
    return out;
  }
  if (spec.lambda || spec.mu)
    throw error(error_kind::config, "soliton: lambda and mu must both be numbers or both be fit");
  return fit_soliton_constants(st, plan, pts);
}

// --- closed-form predictions for V = delta xibar, delta constant ----------------

/// L_{delta xibar} g = 2 s delta beta (g - sum eta eta), so lambda = s delta beta + a and
/// mu = -s delta beta + b with the eta-Einstein constants a, b.
inline real predicted_lambda(int n, int s, real delta, real beta) {
  return s * delta * beta + predicted_a(n, s, beta);
}
inline real predicted_mu(int n, int s, real delta, real beta) {
  return -s * delta * beta + predicted_b(n, s, beta);
}

// --- checks -------------------------------------------------------------------

/// lambda + mu = -2 n beta^2 and (L_V g)(xi_i, xi_j) = 0.
inline theorem_check lambda_plus_mu_check(const weak_f_structure& st, const soliton_spec& spec,
                                          const soliton_fit& fit, const sample_plan& plan,
                                          const tolerances& tol, real h) {
  require_constant_beta(st, "lambda + mu = -2 n beta^2");
  theorem_check out;
  out.name = "lambda_plus_mu";
  residual_accumulator sol("lambda_plus_mu.soliton", "soliton equation holds", tol.d2, comparison::below,
                           residual_category::hypothesis);
  sol.add(fit.residual, plan.points.front());
  out.hypotheses = {sol.finish()};
  if (!out.hypotheses.front().pass) {
    out.applicable = false;
    out.note = "V is not a soliton potential for these constants";
    return out;
  }
  real beta = st.beta(plan.points.front());
  residual_accumulator sum("lambda_plus_mu.sum", "lambda + mu + 2 n beta^2", tol.d2);
  sum.add(fit.lambda + fit.mu + 2 * real(st.n) * beta * beta, plan.points.front());
  residual_accumulator vert("lambda_plus_mu.lie_g_vertical", "(L_V g)(xi_i, xi_j)", tol.d1);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h, 1);
    mat lg = lie_derivative_metric(st.m, geo, spec.v);
    for (int i = 0; i < st.s; ++i)
      for (int j = 0; j < st.s; ++j) vert.add(st.xi[i](p).dot(lg * st.xi[j](p)), p);
  }
  out.conclusions = {sum.finish(), vert.finish()};
  out.constants = {make_constant("lambda_plus_mu", fit.lambda + fit.mu, -2 * real(st.n) * beta * beta,
                                 tol.d2)};
  return out;
}

/// (L_V R)_{X,xi_j} xi_i = 0, with the intermediate steps
///   (L_V nabla)(X, xi_i) = 2 beta Ric^sharp X + 4 n beta^3 {s(X - eta^j(X) xi_j) + etabar(X) xibar}
/// and the full expression of (L_V R)_{X,Y} xi_i through nabla Ric^sharp.
inline theorem_check vertical_curvature_lie_check(const weak_f_structure& st, const soliton_spec& spec,
                                                  const soliton_fit& fit, const sample_plan& plan,
                                                  const tolerances& tol, real h) {
  require_constant_beta(st, "(L_V R)(X, xi_j) xi_i = 0");
  theorem_check out;
  out.name = "vertical_curvature_lie";
  residual_accumulator sol("vertical_curvature_lie.soliton", "soliton equation holds", tol.d2,
                           comparison::below, residual_category::hypothesis);
  sol.add(fit.residual, plan.points.front());
  out.hypotheses = {sol.finish()};
  if (!out.hypotheses.front().pass) {
    out.applicable = false;
    out.note = "V is not a soliton potential for these constants";
    return out;
  }
  residual_accumulator lemma("vertical_curvature_lie.vanishes", "(L_V R)_{X, xi_j} xi_i", tol.d3);
  residual_accumulator conn("vertical_curvature_lie.connection",
                            "(L_V nabla)(X, xi_i) - 2 beta Ric^sharp X - 4 n beta^3 {s(X - eta^j(X) xi_j) "
                            "+ etabar(X) xibar}",
                            tol.d3);
  residual_accumulator full("vertical_curvature_lie.expansion",
                            "(L_V R)_{X,Y} xi_i against its expansion through nabla Ric^sharp", tol.d3);
  auto pool = probe_pool(st, plan);
  for (const auto& p : plan.points) {
    auto ng = nested_geometry_at(st.m, p, h);
    const auto& geo = ng.center;
    real beta = st.beta(p);
    tensor4 lr = lie_derivative_curvature(st.m, ng, spec.v);
    tensor3 lc = lie_derivative_connection(st.m, geo, spec.v);
    auto nr = nabla_ricci_operator(ng);
    mat blk = kenmotsu_block(st, p);
    vec eb = st.etabar(p);
    auto v = detail::pool_values(pool, p);
    auto nabla_ric = [&](const vec& x, const vec& y) {  // (nabla_X Ric^sharp) Y
      vec acc = vec::Zero(geo.n);
      for (int c = 0; c < geo.n; ++c) acc += x[c] * (nr[c] * y);
      return acc;
    };
    real b2 = beta * beta, b3 = b2 * beta, b4 = b3 * beta;
    for (int i = 0; i < st.s; ++i) {
      vec xi = st.xi[i](p);
      for (const auto& x : v) {
        for (int j = 0; j < st.s; ++j) lemma.add(contract(lr, x, st.xi[j](p), xi), p);
        conn.add(contract(lc, x, xi) - 2 * beta * geo.ric_sharp * x - 4 * real(st.n) * b3 * blk * x, p);
        for (const auto& y : v) {
          vec rhs = 2 * beta * (nabla_ric(x, y) - nabla_ric(y, x)) +
                    2 * b2 * (eb.dot(x) * (geo.ric_sharp * y) - eb.dot(y) * (geo.ric_sharp * x)) +
                    4 * real(st.n) * b4 * (eb.dot(x) * (blk * y) - eb.dot(y) * (blk * x));
          full.add(contract(lr, x, y, xi) - rhs, p);
        }
      }
    }
  }
  out.conclusions = {lemma.finish(), conn.finish(), full.finish()};
  return out;
}

/// Covariant derivative chain of the soliton equation:
///   (nabla_Z L_V g)(X,Y) = g((L_V nabla)(Z,X),Y) + g((L_V nabla)(Z,Y),X),
///   1/2 (nabla_Z L_V g)(X,Y) = -(nabla_Z Ric)(X,Y) + beta c {h(X,Z) etabar(Y) + h(Y,Z) etabar(X)},
///   g((L_V nabla)(X,Y),Z) = (nabla_Z Ric)(X,Y) - (nabla_X Ric)(Y,Z) - (nabla_Y Ric)(Z,X) + 2 beta c h(X,Y) etabar(Z),
/// with h = g - sum eta eta and c = mu + (s-1)(lambda+mu).
inline theorem_check soliton_derivative_suite(const weak_f_structure& st, const soliton_spec& spec,
                                              const soliton_fit& fit, const sample_plan& plan,
                                              const tolerances& tol, real h) {
  require_constant_beta(st, "the soliton derivative chain");
  theorem_check out;
  out.name = "soliton_derivatives";
  residual_accumulator sol("soliton_derivatives.soliton", "soliton equation holds", tol.d2,
                           comparison::below, residual_category::hypothesis);
  sol.add(fit.residual, plan.points.front());
  residual_accumulator comm("soliton_derivatives.commutation",
                            "(nabla_Z L_V g)(X,Y) - g((L_V nabla)(Z,X),Y) - g((L_V nabla)(Z,Y),X)", tol.d3);
  residual_accumulator deriv("soliton_derivatives.covariant",
                             "1/2 (nabla_Z L_V g)(X,Y) + (nabla_Z Ric)(X,Y) - beta c {h(X,Z) etabar(Y) + "
                             "h(Y,Z) etabar(X)}",
                             tol.d3);
  residual_accumulator cyc("soliton_derivatives.cyclic",
                           "g((L_V nabla)(X,Y),Z) against the cyclic nabla Ric expression", tol.d3);
  auto pool = probe_pool(st, plan);
  const real c = fit.mu + (st.s - 1) * (fit.lambda + fit.mu);
  for (const auto& p : plan.points) {
    auto ng = nested_geometry_at(st.m, p, h);
    const auto& geo = ng.center;
    real beta = st.beta(p);
    mat lg = lie_derivative_metric(st.m, geo, spec.v);
    auto dlg = ng.partials([&](const local_geometry& g) { return lie_derivative_metric(st.m, g, spec.v); });
    auto nlg = geo.covariant_02(lg, dlg);
    auto nric = nabla_ricci(ng);
    tensor3 lc = lie_derivative_connection(st.m, geo, spec.v);
    mat hf = horizontal_form(st, p, geo.g);
    vec eb = st.etabar(p);
    auto v = detail::pool_values(pool, p);
    auto along = [&](const std::vector<mat>& t, const vec& z) {
      mat acc = mat::Zero(geo.n, geo.n);
      for (int k = 0; k < geo.n; ++k) acc += z[k] * t[k];
      return acc;
    };
    for (const auto& z : v) {
      mat nz_lg = along(nlg, z), nz_ric = along(nric, z);
      for (const auto& x : v)
        for (const auto& y : v) {
          real lhs = x.dot(nz_lg * y);
          comm.add(lhs - geo.ip(contract(lc, z, x), y) - geo.ip(contract(lc, z, y), x), p);
          deriv.add(lhs / 2 + x.dot(nz_ric * y) -
                        beta * c * (x.dot(hf * z) * eb.dot(y) + y.dot(hf * z) * eb.dot(x)),
                    p);
          real rhs = x.dot(nz_ric * y) - y.dot(along(nric, x) * z) - z.dot(along(nric, y) * x) +
                     2 * beta * c * x.dot(hf * y) * eb.dot(z);
          cyc.add(geo.ip(contract(lc, x, y), z) - rhs, p);
        }
    }
  }
  // the commutation identity holds for any V; the other two need the soliton
  out.hypotheses = {sol.finish()};
  out.conclusions = {comm.finish()};
  if (out.hypotheses.front().pass) {
    out.conclusions.push_back(deriv.finish());
    out.conclusions.push_back(cyc.finish());
  } else {
    out.note = "V is not a soliton potential; only the commutation identity is asserted";
  }
  return out;
}

/// Soliton plus eta-Einstein forces a = -2 s n beta^2, b = 2(s-1) n beta^2, r = -2 s n (2n+1) beta^2.
inline theorem_check eta_einstein_soliton_check(const weak_f_structure& st, const soliton_fit& fit,
                                                const sample_plan& plan, const tolerances& tol, real h) {
  require_constant_beta(st, "the eta-Einstein soliton constants");
  theorem_check out;
  out.name = "eta_einstein_soliton";
  auto geos = local_geometries(st, plan, h);
  auto ee = fit_eta_einstein(st, plan, geos);
  residual_accumulator sol("eta_einstein_soliton.soliton", "soliton equation holds", tol.d2,
                           comparison::below, residual_category::hypothesis);
  sol.add(fit.residual, plan.points.front());
  residual_accumulator ein("eta_einstein_soliton.eta_einstein", "eta-Einstein fit residual", tol.d2,
                           comparison::below, residual_category::hypothesis);
  ein.add(ee.residual, plan.points.front());
  out.hypotheses = {sol.finish(), ein.finish()};
  if (!all_pass(out.hypotheses)) {
    out.applicable = false;
    out.note = "soliton or eta-Einstein hypothesis not met";
    return out;
  }
  real beta = st.beta(plan.points.front());
  residual_accumulator scal("eta_einstein_soliton.scalar", "r + 2 s n (2n+1) beta^2", tol.d2);
  for (std::size_t t = 0; t < geos.size(); ++t)
    scal.add(geos[t].scalar - predicted_scalar_curvature(st.n, st.s, beta), plan.points[t]);
  out.conclusions = {scal.finish()};
  out.constants = {make_constant("a", ee.a, predicted_a(st.n, st.s, beta), tol.d2),
                   make_constant("b", ee.b, predicted_b(st.n, st.s, beta), tol.d2),
                   make_constant("r", ee.scalar_r, predicted_scalar_curvature(st.n, st.s, beta), tol.d2)};
  return out;
}

struct rho_estimate {
  real rho = 0;  // averaged over i
  real off = 0;  // max |L_V eta^i - rho eta^i|
};

/// rho(p) = <L_V eta^i, eta^i> / <eta^i, eta^i> averaged over i, inner products through g^{-1}.
inline rho_estimate fit_rho(const weak_f_structure& st, const vector_field& v, const point& p, real h) {
  mat ginv = st.m.metric_at(p).inverse();
  std::vector<vec> lie;
  rho_estimate out;
  for (int i = 0; i < st.s; ++i) {
    vec e = st.eta[i](p);
    vec l = lie_derivative_covector(st.m, v, st.eta[i], p, h);
    out.rho += l.dot(ginv * e) / e.dot(ginv * e);
    lie.push_back(l);
  }
  out.rho /= st.s;
  for (int i = 0; i < st.s; ++i) out.off = std::max(out.off, max_abs(vec(lie[i] - out.rho * st.eta[i](p))));
  return out;
}

/// Soliton with a contact potential V (L_V eta^i = rho eta^i): V is strict,
/// L_V xi_i = 0, (L_V nabla)(X, xi_i) = 0 and Ric^sharp takes the closed form.
inline theorem_check contact_potential_verify(const weak_f_structure& st, const soliton_spec& spec,
                                              const soliton_fit& fit, const sample_plan& plan,
                                              const tolerances& tol, real h) {
  require_constant_beta(st, "the contact potential theorem");
  theorem_check out;
  out.name = "contact_potential";
  residual_accumulator sol("contact_potential.soliton", "soliton equation holds", tol.d2,
                           comparison::below, residual_category::hypothesis);
  sol.add(fit.residual, plan.points.front());
  residual_accumulator contact("contact_potential.contact", "L_V eta^i - rho eta^i", tol.d1,
                               comparison::below, residual_category::hypothesis);
  residual_accumulator strict("contact_potential.strict", "rho", tol.d1);
  real rho_max = 0;
  for (const auto& p : plan.points) {
    auto r = fit_rho(st, spec.v, p, h);
    contact.add(r.off, p);
    strict.add(r.rho, p);
    if (std::fabs(r.rho) > std::fabs(rho_max)) rho_max = r.rho;
  }
  out.hypotheses = {sol.finish(), contact.finish()};
  out.constants = {make_constant("rho", rho_max, std::nullopt, tol.d1)};
  if (!all_pass(out.hypotheses)) {
    out.applicable = false;
    out.note = out.hypotheses[1].pass ? "V is not a soliton potential" : "V is not a contact vector field";
    return out;
  }
  residual_accumulator lxi("contact_potential.lie_xi", "L_V xi_i = [V, xi_i]", tol.d1);
  residual_accumulator conn("contact_potential.connection_xi", "(L_V nabla)(X, xi_i)", tol.d2);
  residual_accumulator form("contact_potential.ricci_form",
                            "Ric^sharp + 2 n beta^2 {sX - s eta^j(X) xi_j + etabar(X) xibar}", tol.d2);
  residual_accumulator scal("contact_potential.scalar", "r + 2 s n (2n+1) beta^2", tol.d2);
  auto pool = probe_pool(st, plan);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h);
    real beta = st.beta(p);
    tensor3 lc = lie_derivative_connection(st.m, geo, spec.v);
    for (int i = 0; i < st.s; ++i) {
      lxi.add(lie_bracket(st.m, spec.v, st.xi[i], p, h), p);
      for (const auto& xf : pool) conn.add(contract(lc, xf(p), st.xi[i](p)), p);
    }
    form.add(geo.ric_sharp - closed_ricci_operator(st, p, beta), p);
    scal.add(geo.scalar - predicted_scalar_curvature(st.n, st.s, beta), p);
  }
  out.conclusions = {strict.finish(), lxi.finish(), conn.finish(), form.finish(), scal.finish()};
  return out;
}

/// Soliton with V = delta xibar: delta is constant, the constants follow from the
/// eta-Einstein constants, and 2 Ric(X,Y) = -X(delta) etabar(Y) - Y(delta) etabar(X)
/// + 2(lambda - s delta beta) g + 2(s delta beta + mu) sum eta eta - 4 n beta^2 sum_{i!=j} eta eta.
inline theorem_check collinear_potential_verify(const weak_f_structure& st, const soliton_spec& spec,
                                                const soliton_fit& fit, const sample_plan& plan,
                                                const tolerances& tol, real h) {
  require_constant_beta(st, "the collinear potential theorem");
  if (!spec.delta) throw error(error_kind::precondition, "collinear potential needs V = delta * xibar");
  const expr& delta = *spec.delta;
  scalar_field df = [&delta](const point& p) { return delta.evaluate(p); };
  for (const auto& p : plan.points)
    if (df(p) == 0)
      throw error(error_kind::precondition, "delta vanishes at " + format_point(p));
  theorem_check out;
  out.name = "collinear_potential";
  residual_accumulator sol("collinear_potential.soliton", "soliton equation holds", tol.d2,
                           comparison::below, residual_category::hypothesis);
  sol.add(fit.residual, plan.points.front());
  out.hypotheses = {sol.finish()};
  if (!out.hypotheses.front().pass) {
    out.applicable = false;
    out.note = "no soliton with this potential";
    return out;
  }
  residual_accumulator dconst("collinear_potential.delta_constant", "X(delta) over probe directions", tol.d1);
  residual_accumulator scal("collinear_potential.scalar", "r + 2 s n (2n+1) beta^2", tol.d2);
  residual_accumulator twice("collinear_potential.ricci_identity",
                             "2 Ric(X,Y) against the delta form of the soliton equation", tol.d2);
  auto pool = probe_pool(st, plan);
  const int n = st.n, s = st.s;
  real dsum = 0;
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h);
    real beta = st.beta(p), d = df(p);
    auto dd = partials(st.m, df, p, h);
    vec grad = Eigen::Map<const vec>(dd.data(), static_cast<Eigen::Index>(dd.size()));
    vec eb = st.etabar(p);
    mat ee = st.eta_eta(p);
    mat cross = eb * eb.transpose() - ee;
    auto v = detail::pool_values(pool, p);
    for (const auto& x : v) {
      real xd = grad.dot(x);
      dconst.add(xd, p);
      for (const auto& y : v) {
        real rhs = -xd * eb.dot(y) - grad.dot(y) * eb.dot(x) + 2 * (fit.lambda - s * d * beta) * geo.ip(x, y) +
                   2 * (s * d * beta + fit.mu) * x.dot(ee * y) - 4 * real(n) * beta * beta * x.dot(cross * y);
        twice.add(2 * x.dot(geo.ric * y) - rhs, p);
      }
    }
    scal.add(geo.scalar - predicted_scalar_curvature(n, s, beta), p);
    dsum += d;
  }
  out.conclusions = {dconst.finish(), scal.finish(), twice.finish()};
  real beta = st.beta(plan.points.front());
  real dmean = dsum / real(plan.points.size());
  out.constants = {make_constant("delta", dmean, std::nullopt, tol.d1),
                   make_constant("lambda", fit.lambda, predicted_lambda(n, s, dmean, beta), tol.d2),
                   make_constant("mu", fit.mu, predicted_mu(n, s, dmean, beta), tol.d2)};
  return out;
}

struct soliton_result {
  soliton_fit fit;
  residual_list residuals;
  std::vector<fitted_constant> constants;
  std::vector<theorem_check> checks;
};

/// Resolves (lambda, mu), then runs every soliton check in a fixed order.
inline soliton_result soliton_suite(const weak_f_structure& st, const soliton_spec& spec,
                                    const sample_plan& plan, const tolerances& tol, real h) {
  require_constant_beta(st, "the soliton suite");
  soliton_result out;
  auto pts = detail::soliton_points(st, spec, plan, h);
  out.fit = resolve_soliton(st, spec, plan, pts);
  residual_accumulator res("soliton.residual", "1/2 L_V g + Ric - lambda g - mu sum eta eta - (lambda+mu) sum_{i!=j} eta eta",
                           tol.d2);
  auto pool = probe_pool(st, plan);
  for (std::size_t t = 0; t < pts.size(); ++t) {
    mat e = soliton_residual(st, pts[t].geo, pts[t].lie_g, out.fit.lambda, out.fit.mu);
    for (const auto& xf : pool)
      for (const auto& yf : pool) res.add(xf(plan.points[t]).dot(e * yf(plan.points[t])), plan.points[t]);
  }
  out.residuals = {res.finish()};
  std::optional<real> pl, pm;
  real beta = st.beta(plan.points.front());
  if (spec.delta && spec.delta->is_constant()) {
    pl = predicted_lambda(st.n, st.s, spec.delta->constant_value(), beta);
    pm = predicted_mu(st.n, st.s, spec.delta->constant_value(), beta);
  }
  out.constants = {make_constant("lambda", out.fit.lambda, pl, tol.d2),
                   make_constant("mu", out.fit.mu, pm, tol.d2)};
  out.checks.push_back(lambda_plus_mu_check(st, spec, out.fit, plan, tol, h));
  out.checks.push_back(vertical_curvature_lie_check(st, spec, out.fit, plan, tol, h));
  out.checks.push_back(soliton_derivative_suite(st, spec, out.fit, plan, tol, h));
  out.checks.push_back(eta_einstein_soliton_check(st, out.fit, plan, tol, h));
  out.checks.push_back(contact_potential_verify(st, spec, out.fit, plan, tol, h));
  if (spec.delta) out.checks.push_back(collinear_potential_verify(st, spec, out.fit, plan, tol, h));
  return out;
}

}  // namespace kenlab
