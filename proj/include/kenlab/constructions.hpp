#pragma once

// Twisted and warped products R^s x_sigma M over weak Kaehler fibers.

#include "kenlab/expr.hpp"
#include "kenlab/fstructure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kenlab {

/// A 2n-dimensional fiber with metric gbar and a skew, parallel J with J^2 < 0.
/// Callbacks take fiber points (x_1..x_2n).
struct weak_kaehler_fiber {
  int n = 0;
  metric_field metric;
  tensor11_field j;
  bool flat = false;
  std::vector<real> lambdas;  // flat fibers only
};

/// Flat fiber with constant J made of blocks [[0, l_k], [-l_k, 0]].
inline weak_kaehler_fiber build_flat_fiber(int n, const std::vector<real>& lambdas) {
  if (n < 1) throw error(error_kind::config, "fiber: n must be at least 1");
  if (static_cast<int>(lambdas.size()) != n)
    throw error(error_kind::config, "fiber: expected " + std::to_string(n) + " lambdas, got " +
                                        std::to_string(lambdas.size()));
  mat j = mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    if (!(lambdas[k] > 0))
      throw error(error_kind::config, "fiber: lambda " + std::to_string(k + 1) + " must be positive");
    j(2 * k, 2 * k + 1) = lambdas[k];
    j(2 * k + 1, 2 * k) = -lambdas[k];
  }
  weak_kaehler_fiber fb;
  fb.n = n;
  fb.flat = true;
  fb.lambdas = lambdas;
  fb.metric = [n](const point&) { return mat(mat::Identity(2 * n, 2 * n)); };
  fb.j = [j](const point&) { return j; };
  return fb;
}

inline charted_manifold fiber_manifold(const weak_kaehler_fiber& fb, const vec& lo, const vec& hi) {
  std::vector<std::string> names;
  for (int a = 1; a <= 2 * fb.n; ++a) names.push_back("x_" + std::to_string(a));
  return charted_manifold(2 * fb.n, names, fb.metric, lo, hi);
}

inline residual_list validate_weak_kaehler(const weak_kaehler_fiber& fb, const charted_manifold& fm,
                                           const sample_plan& plan, const tolerances& tol, real h) {
  residual_accumulator skew("fiber.j_skew", "gbar(JX, Y) + gbar(X, JY)", tol.id);
  residual_accumulator negdef("fiber.j_square_negative",
                              "smallest eigenvalue of -J^2 relative to gbar", tol.id,
                              comparison::above);
  residual_accumulator parallel("fiber.nabla_j", "(nablabar J) = 0", tol.d1);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(fm, p, h, 1);
    mat j = fb.j(p);
    mat gj = geo.g * j;
    skew.add(gj + gj.transpose(), p);
    mat form = j.transpose() * geo.g * j;  // gbar(JX, JX) = gbar(-J^2 X, X)
    form = (form + form.transpose()) / 2;
    Eigen::GeneralizedSelfAdjointEigenSolver<mat> es(form, geo.g);
    negdef.add(es.eigenvalues().minCoeff(), p);
    auto nj = geo.covariant_11(j, partials(fm, fb.j, p, h));
    for (const auto& c : nj) parallel.add(c, p);
  }
  return {skew.finish(), negdef.finish(), parallel.finish()};
}

enum class warping_kind { warped, twisted };

inline const char* to_string(warping_kind k) { return k == warping_kind::warped ? "warped" : "twisted"; }

struct warping_spec {
  expr sigma;
  warping_kind kind = warping_kind::warped;
};

/// Classifies sigma syntactically: twisted iff it mentions a fiber coordinate.
inline warping_spec make_warping(const expr& sigma, int s) {
  warping_spec w{sigma, warping_kind::warped};
  for (int v : sigma.variables())
    if (v >= s) w.kind = warping_kind::twisted;
  return w;
}

struct product_options {
  std::optional<expr> beta;  // declared beta; derived from sigma when absent
  bool check_warping = true;
  real h = 1e-3L;
  vec lo, hi;  // chart box; defaults to [-0.5, 0.5]
};

namespace detail {

inline scalar_field log_sigma(const charted_manifold& m, const expr& sigma) {
  return [&m, sigma](const point& q) {
    m.require_inside(q);
    real v = sigma.evaluate(q);
    if (!(v > 0))
      throw error(error_kind::domain, "warping function sigma is not positive at " + format_point(q));
    return std::log(v);
  };
}

}  // namespace detail

/// xi_i(ln sigma) at p.
inline real xi_log_sigma(const charted_manifold& m, const expr& sigma, int i, const point& p, real h) {
  auto ls = detail::log_sigma(m, sigma);
  return stencil::partial(ls, p, i, h);
}

/// g = sum dt_i^2 + sigma^2 gbar, xi_i = d/dt_i, eta^i = dt_i,
/// f = 0 (+) J, Q = id (+) (-J^2).
inline weak_f_structure build_twisted_product(int s, const weak_kaehler_fiber& fb,
                                              const warping_spec& w, const product_options& opt = {}) {
  if (s < 1) throw error(error_kind::config, "s must be at least 1");
  const int n = fb.n, dim = 2 * n + s;
  if (dim > max_dim)
    throw error(error_kind::config, "dimension 2n+s = " + std::to_string(dim) + " exceeds " +
                                        std::to_string(max_dim));
  auto names = coordinate_names(n, s);
  if (w.sigma.coords() != names && !w.sigma.is_constant())
    throw error(error_kind::config, "sigma must be parsed over t_1..t_s, x_1..x_2n");
  expr sigma = w.sigma;
  metric_field fmetric = fb.metric;
  auto metric = [sigma, fmetric, s, n](const point& p) {
    mat g = mat::Zero(s + 2 * n, s + 2 * n);
    g.topLeftCorner(s, s).setIdentity();
    real sg = sigma.evaluate(p);
    if (!(sg > 0))
      throw error(error_kind::domain, "warping function sigma is not positive at " + format_point(p));
    point x = p.tail(2 * n);
    g.bottomRightCorner(2 * n, 2 * n) = sg * sg * fmetric(x);
    return g;
  };
  vec lo = opt.lo.size() ? opt.lo : vec::Constant(dim, -0.5L);
  vec hi = opt.hi.size() ? opt.hi : vec::Constant(dim, 0.5L);
  weak_f_structure st{charted_manifold(dim, names, metric, lo, hi)};
  st.n = n;
  st.s = s;
  tensor11_field j = fb.j;
  st.f = [j, s, n](const point& p) {
    mat f = mat::Zero(s + 2 * n, s + 2 * n);
    f.bottomRightCorner(2 * n, 2 * n) = j(point(p.tail(2 * n)));
    return f;
  };
  st.q = [j, s, n](const point& p) {
    mat q = mat::Identity(s + 2 * n, s + 2 * n);
    mat jj = j(point(p.tail(2 * n)));
    q.bottomRightCorner(2 * n, 2 * n) = -jj * jj;
    return q;
  };
  for (int i = 0; i < s; ++i) {
    st.xi.push_back(coordinate_field(dim, i));
    st.eta.push_back([dim, i](const point&) { return vec(basis(dim, i)); });
  }
  if (opt.beta) {
    expr b = *opt.beta;
    st.beta = [b](const point& p) { return b.evaluate(p); };
    st.beta_constant = b.is_constant();
  } else {
    // beta = xi_1(ln sigma); the closure owns its own chart copy
    auto chart = std::make_shared<charted_manifold>(st.m);
    real h = opt.h;
    st.beta = [chart, sigma, h](const point& p) { return xi_log_sigma(*chart, sigma, 0, p, h); };
    st.beta_constant = false;
  }
  if (opt.check_warping) {
    // quick consistency probe on a fixed coarse plan
    auto plan = sample_plan::make(st.m, 0, 16, opt.h);
    for (const auto& p : plan.points) {
      real s0 = xi_log_sigma(st.m, sigma, 0, p, opt.h);
      for (int i = 1; i < s; ++i) {
        real si = xi_log_sigma(st.m, sigma, i, p, opt.h);
        if (std::fabs(si - s0) > 1e-6L)
          throw error(error_kind::config,
                      "inconsistent warping: xi_" + std::to_string(i + 1) + "(ln sigma) differs from xi_1(ln sigma) at " +
                          format_point(p));
      }
    }
  }
  return st;
}

/// Residuals tying sigma to a single beta: xi_i(ln sigma) all equal, equal to
/// the declared beta, and the warped/twisted classification confirmed numerically.
inline residual_list warping_checks(const weak_f_structure& st, const warping_spec& w,
                                    const sample_plan& plan, const tolerances& tol, real h) {
  residual_accumulator pos("warping.sigma_positive", "min sigma over sample points", 0,
                           comparison::above, residual_category::hypothesis);
  residual_accumulator consist("warping.xi_consistency", "xi_i(ln sigma) - xi_1(ln sigma)", tol.d1,
                               comparison::below, residual_category::hypothesis);
  residual_accumulator beta("warping.beta_consistency", "xi_1(ln sigma) - beta", tol.d1,
                            comparison::below, residual_category::hypothesis);
  residual_accumulator kind("warping.classification",
                            "declared kind disagrees with max |X(ln sigma)| over D probes", 0.5L);
  real fiber_grad = 0;
  for (const auto& p : plan.points) {
    pos.add(w.sigma.evaluate(p), p);
    real s0 = xi_log_sigma(st.m, w.sigma, 0, p, h);
    for (int i = 1; i < st.s; ++i) consist.add(xi_log_sigma(st.m, w.sigma, i, p, h) - s0, p);
    beta.add(s0 - st.beta(p), p);
    auto ls = detail::log_sigma(st.m, w.sigma);
    for (int a = st.s; a < st.dim(); ++a)
      fiber_grad = std::max(fiber_grad, std::fabs(stencil::partial(ls, p, a, h)));
  }
  bool numeric_warped = fiber_grad < tol.d1;
  kind.add((numeric_warped == (w.kind == warping_kind::warped)) ? 0 : 1,
           plan.points.empty() ? point() : plan.points.front());
  return {pos.finish(), consist.finish(), beta.finish(), kind.finish()};
}

/// Weingarten operators A_{xi_i} = -(nabla xi_i)^D on D, and the mean
/// curvature vector of D computed from an orthonormal frame.
inline residual_list umbilicity_check(const weak_f_structure& st, const sample_plan& plan,
                                      const tolerances& tol, real h) {
  residual_accumulator weingarten("umbilicity.weingarten", "A_{xi_i} X + beta X for X in D", tol.d1);
  residual_accumulator mean("umbilicity.mean_curvature", "H + beta xibar", tol.d1);
  const int dim = st.dim();
  for (const auto& p : plan.points) {
    auto geo = geometry_at(st.m, p, h, 1);
    mat vert = st.vertical_projector(p);
    mat pd = mat::Identity(dim, dim) - vert;
    real beta = st.beta(p);
    for (int i = 0; i < st.s; ++i) {
      mat nxi = geo.covariant_jacobian(st.xi[i](p), jacobian(st.m, st.xi[i], p, h));
      mat a = -pd * nxi;
      weingarten.add((a + beta * mat::Identity(dim, dim)) * pd, p);
    }
    // orthonormal frame of D by Gram-Schmidt on projected coordinate vectors
    std::vector<vec> frame;
    for (int c = 0; c < dim && static_cast<int>(frame.size()) < 2 * st.n; ++c) {
      vec e = pd * basis(dim, c);
      for (const auto& u : frame) e -= geo.ip(e, u) * u;
      real len = std::sqrt(geo.ip(e, e));
      if (len > 1e-6L) frame.push_back(e / len);
    }
    vec hvec = vec::Zero(dim);
    for (const auto& e : frame) hvec += vert * geo.christoffel(e, e);
    hvec /= real(2 * st.n);
    mean.add(hvec + beta * st.xibar(p), p);
  }
  return {weingarten.finish(), mean.finish()};
}

// --- fault injection ------------------------------------------------------------

/// Q xi_1 = (1 + eps) xi_1; breaks the framed axioms.
inline weak_f_structure perturb_q_on_xi(weak_f_structure st, real eps) {
  tensor11_field q = st.q;
  vector_field x = st.xi[0];
  covector_field e = st.eta[0];
  st.q = [q, x, e, eps](const point& p) { return mat(q(p) + eps * x(p) * e(p).transpose()); };
  return st;
}

/// Doubles g along x_1 only. Scaling all of D by a constant leaves
/// compatibility intact, so the fault has to break the fiber isotropy.
inline weak_f_structure scale_metric_on_first_fiber_direction(weak_f_structure st, real factor) {
  const int a = st.s;
  metric_field g = st.m.metric();
  charted_manifold m(st.dim(), st.m.coords(),
                     [g, a, factor](const point& p) {
                       mat out = g(p);
                       out.row(a) *= std::sqrt(factor);
                       out.col(a) *= std::sqrt(factor);
                       return out;
                     },
                     st.m.lo(), st.m.hi());
  st.m = m;
  return st;
}

}  // namespace kenlab
