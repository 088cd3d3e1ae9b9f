#include "kenlab/constructions.hpp"
#include "kenlab/soliton.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kenlab;

namespace {

const real h = 1e-3L;
const tolerances tol;

weak_f_structure make(int n, int s, std::vector<real> lambdas, const std::string& sigma,
                      const std::string& beta) {
  auto names = coordinate_names(n, s);
  product_options opt;
  opt.beta = expr::parse(beta, names);
  return build_twisted_product(s, build_flat_fiber(n, lambdas),
                               make_warping(expr::parse(sigma, names), s), opt);
}

weak_f_structure example() { return make(1, 2, {1}, "exp(t_1+t_2)", "1"); }

sample_plan plan_for(const weak_f_structure& st, int count = 4) {
  return sample_plan::make(st.m, 42, count, h);
}

soliton_spec collinear(const weak_f_structure& st, const std::string& delta) {
  return collinear_potential(st, expr::parse(delta, st.m.coords()));
}

soliton_spec components(const weak_f_structure& st, const std::vector<std::string>& v) {
  std::vector<expr> c;
  for (const auto& e : v) c.push_back(expr::parse(e, st.m.coords()));
  return component_potential(c);
}

void expect_all_pass(const residual_list& list) {
  for (const auto& r : list)
    EXPECT_TRUE(r.pass) << r.name << " = " << static_cast<double>(r.max_abs) << " (tol "
                        << static_cast<double>(r.tolerance) << ")";
}

const theorem_check& check_named(const soliton_result& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

// Warped product over a flat 2n-fiber with sigma = exp(beta sum t_i), V = delta xibar:
// on a unit fiber vector u, 1/2 (L_V g)(u,u) = delta sum_i xi_i(ln sigma) = s delta beta and
// Ric(u,u) = -(k-1)|grad ln sigma|^2 - Lap sigma / sigma = -2 s n beta^2 (k = 2n);
// on xi_i, L_V g vanishes and Ric(xi_i, xi_i) = -2 n beta^2 = lambda + mu.
real oracle_lambda(int n, int s, real delta, real beta) {
  real k = 2 * n;
  return s * delta * beta - ((k - 1) * s * beta * beta + s * beta * beta);
}
real oracle_mu(int n, int s, real delta, real beta) {
  return -2 * n * beta * beta - oracle_lambda(n, s, delta, beta);
}

}  // namespace

TEST(Soliton, ClosedFormsMatchOracle) {
  for (int n = 1; n <= 3; ++n)
    for (int s = 1; s <= 3; ++s)
      for (real d : {3.0L, -1.0L, 0.5L}) {
        EXPECT_NEAR(predicted_lambda(n, s, d, 1), oracle_lambda(n, s, d, 1), 1e-15);
        EXPECT_NEAR(predicted_mu(n, s, d, 2), oracle_mu(n, s, d, 2), 1e-15);
      }
}

TEST(Soliton, CollinearDeltaThreeFit) {
  auto st = example();
  auto spec = collinear(st, "3");
  auto plan = plan_for(st);
  auto fit = fit_soliton_constants(st, spec, plan, h);
  EXPECT_LT(fit.residual, tol.d2);
  EXPECT_NEAR(fit.lambda, oracle_lambda(1, 2, 3, 1), 1e-4);
  EXPECT_NEAR(fit.mu, oracle_mu(1, 2, 3, 1), 1e-4);
  EXPECT_NEAR(fit.lambda + fit.mu, -2, 1e-4);
}

TEST(Soliton, ClassicalCollinear) {
  auto st = make(1, 1, {1}, "exp(t_1)", "1");
  auto fit = fit_soliton_constants(st, collinear(st, "1"), plan_for(st), h);
  EXPECT_NEAR(fit.lambda, oracle_lambda(1, 1, 1, 1), 1e-4);
  EXPECT_NEAR(fit.mu, oracle_mu(1, 1, 1, 1), 1e-4);
}

TEST(Soliton, SuiteOnCollinearPotential) {
  auto st = example();
  auto res = soliton_suite(st, collinear(st, "3"), plan_for(st, 3), tol, h);
  expect_all_pass(res.residuals);
  for (const auto& c : res.constants) EXPECT_TRUE(c.pass) << c.name;
  for (const auto& c : res.checks) {
    EXPECT_TRUE(c.applicable) << c.name << ": " << c.note;
    EXPECT_TRUE(c.pass()) << c.name;
    expect_all_pass(c.conclusions);
  }
  const auto& coll = check_named(res, "collinear_potential");
  EXPECT_LT(find(coll.conclusions, "collinear_potential.delta_constant")->max_abs, 1e-6);
  EXPECT_NEAR(find_constant(check_named(res, "eta_einstein_soliton").constants, "r")->value, -12, 1e-4);
}

TEST(Soliton, ZeroPotentialIsEtaEinsteinFit) {
  auto st = make(2, 1, {1, 1}, "exp(t_1)", "1");
  auto plan = plan_for(st, 3);
  auto fit = fit_soliton_constants(st, components(st, {"0", "0", "0", "0", "0"}), plan, h);
  auto ee = fit_eta_einstein(st, plan, local_geometries(st, plan, h));
  EXPECT_NEAR(fit.lambda, ee.a, 1e-9);
  EXPECT_NEAR(fit.mu, ee.b, 1e-9);
  EXPECT_NEAR(fit.lambda + fit.mu, -4, 1e-4);
}

TEST(Soliton, DetunedConstantsFail) {
  auto st = example();
  auto spec = collinear(st, "3");
  spec.lambda = 2.1L;
  spec.mu = -3.9L;
  auto res = soliton_suite(st, spec, plan_for(st, 3), tol, h);
  EXPECT_FALSE(res.residuals.front().pass);
  EXPECT_GT(res.residuals.front().max_abs, 0.05);
  EXPECT_FALSE(check_named(res, "lambda_plus_mu").applicable);
}

TEST(Soliton, NonContactPotential) {
  auto st = example();
  auto spec = components(st, {"x_1", "0", "0", "0"});
  auto res = soliton_suite(st, spec, plan_for(st, 3), tol, h);
  EXPECT_FALSE(res.residuals.front().pass);
  const auto& contact = check_named(res, "contact_potential");
  EXPECT_FALSE(contact.applicable);
  EXPECT_FALSE(find(contact.hypotheses, "contact_potential.contact")->pass);
  EXPECT_FALSE(check_named(res, "vertical_curvature_lie").applicable);
}

TEST(Soliton, ContactButNotStrictIsInapplicable) {
  auto st = example();
  auto spec = components(st, {"0.5*t_1", "0.5*t_2", "0", "0"});
  auto plan = plan_for(st, 3);
  auto fit = fit_soliton_constants(st, spec, plan, h);
  auto c = contact_potential_verify(st, spec, fit, plan, tol, h);
  EXPECT_TRUE(find(c.hypotheses, "contact_potential.contact")->pass);
  EXPECT_NEAR(find_constant(c.constants, "rho")->value, 0.5, 1e-6);
  EXPECT_FALSE(c.applicable);
}

TEST(Soliton, NonconstantDeltaIsNoSoliton) {
  auto st = example();
  auto spec = collinear(st, "3+t_1");
  auto plan = plan_for(st, 3);
  auto fit = fit_soliton_constants(st, spec, plan, h);
  EXPECT_GT(fit.residual, tol.d2);
  auto c = collinear_potential_verify(st, spec, fit, plan, tol, h);
  EXPECT_FALSE(c.applicable);
}

TEST(Soliton, VanishingDeltaIsPrecondition) {
  auto st = example();
  auto spec = collinear(st, "0");
  auto plan = plan_for(st, 2);
  soliton_fit fit;
  try {
    collinear_potential_verify(st, spec, fit, plan, tol, h);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::precondition);
  }
}

TEST(Soliton, DegenerateProbePoolIsUnderdetermined) {
  auto st = example();
  auto plan = plan_for(st, 2);
  for (auto& p : plan.probes) std::fill(p.coeff.begin(), p.coeff.end(), real(0));
  try {
    fit_soliton_constants(st, collinear(st, "3"), plan, h);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::underdetermined);
  }
}

TEST(Soliton, CommutationIdentitySignGuard) {
  // (nabla_Z L_V g)(X,Y) = g((L_V nabla)(Z,X),Y) + g((L_V nabla)(Z,Y),X) for a generic V;
  // flipping the right side must leave a residual of twice the magnitude
  auto st = example();
  auto spec = components(st, {"x_1*t_2", "t_1^2", "sin(x_2)", "x_1"});
  point p = plan_for(st).points[0];
  auto ng = nested_geometry_at(st.m, p, h);
  const auto& geo = ng.center;
  mat lg = lie_derivative_metric(st.m, geo, spec.v);
  auto dlg = ng.partials([&](const local_geometry& g) { return lie_derivative_metric(st.m, g, spec.v); });
  auto nlg = geo.covariant_02(lg, dlg);
  tensor3 lc = lie_derivative_connection(st.m, geo, spec.v);
  real good = 0, flipped = 0, scale = 0;
  for (int z = 0; z < 4; ++z)
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        vec ex = basis(4, x), ey = basis(4, y), ez = basis(4, z);
        real lhs = nlg[z](x, y);
        real rhs = geo.ip(contract(lc, ez, ex), ey) + geo.ip(contract(lc, ez, ey), ex);
        good = std::max(good, std::fabs(lhs - rhs));
        flipped = std::max(flipped, std::fabs(lhs + rhs));
        scale = std::max(scale, std::fabs(lhs));
      }
  EXPECT_LT(good, tol.d3);
  EXPECT_GT(scale, 0.1);
  EXPECT_NEAR(flipped, 2 * scale, 1e-3);
}

TEST(Soliton, KillingFieldOnFlatChart) {
  // Euclidean chart with a trivial product structure: rotation is Killing, L_V nabla = 0
  std::vector<std::string> names{"t_1", "x_1", "x_2"};
  charted_manifold m(3, names, [](const point&) { return mat(mat::Identity(3, 3)); });
  vector_field v = [](const point& p) {
    vec out(3);
    out << 0, -p[2], p[1];
    return out;
  };
  point p = point::Constant(3, 0.1L);
  auto geo = geometry_at(m, p, h);
  EXPECT_LT(lie_derivative_metric(m, geo, v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(lie_derivative_connection(m, geo, v).max_abs(), 1e-9);
  auto ng = nested_geometry_at(m, p, h);
  EXPECT_LT(lie_derivative_curvature(m, ng, v).max_abs(), 1e-9);
}
