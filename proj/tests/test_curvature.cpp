#include "kenlab/constructions.hpp"
#include "kenlab/curvature_identities.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kenlab;

namespace {

const real h = 1e-3L;
const tolerances tol;

weak_f_structure make(int n, int s, std::vector<real> lambdas, const std::string& sigma,
                      const std::string& beta, bool check = true) {
  auto names = coordinate_names(n, s);
  product_options opt;
  opt.beta = expr::parse(beta, names);
  opt.check_warping = check;
  return build_twisted_product(s, build_flat_fiber(n, lambdas),
                               make_warping(expr::parse(sigma, names), s), opt);
}

weak_f_structure warped(int n, int s, real beta) {
  std::string sum = "t_1";
  for (int i = 2; i <= s; ++i) sum += "+t_" + std::to_string(i);
  std::string b = std::to_string(static_cast<int>(beta));
  return make(n, s, std::vector<real>(n, 1), "exp(" + b + "*(" + sum + "))", b);
}

sample_plan plan_for(const weak_f_structure& st, int count = 4) {
  return sample_plan::make(st.m, 42, count, h);
}

void expect_all_pass(const residual_list& list) {
  for (const auto& r : list)
    EXPECT_TRUE(r.pass) << r.name << " = " << static_cast<double>(r.max_abs) << " (tol "
                        << static_cast<double>(r.tolerance) << ")";
}

const residual_field& get(const residual_list& list, const std::string& name) {
  auto r = find(list, name);
  if (!r) throw std::runtime_error("missing residual " + name);
  return *r;
}

// Warped product B x_f F with flat base R^s and flat fiber of dimension k,
// f = exp(beta sum t_i): Hess f = beta^2 f (all-ones), Laplacian f = s beta^2 f,
// |grad f|^2 = s beta^2 f^2.  O'Neill's formulas:
//   r = -2k (Lap f)/f - k(k-1) |grad f|^2 / f^2,
//   Ric(U, V) = -(k/f) Hess f(U, V) on base vectors.
real oracle_scalar(int n, int s, real beta) {
  real k = 2 * n;
  return -2 * k * s * beta * beta - k * (k - 1) * s * beta * beta;
}
real oracle_ricci_base(int n, real beta) { return -real(2 * n) * beta * beta; }

}  // namespace

TEST(Curvature, ClosedFormsAgreeWithWarpedProductOracle) {
  for (int n = 1; n <= 3; ++n)
    for (int s = 1; s <= 3; ++s)
      for (real beta : {1.0L, 2.0L, 0.5L}) {
        EXPECT_NEAR(predicted_scalar_curvature(n, s, beta), oracle_scalar(n, s, beta), 1e-15);
        EXPECT_NEAR((2 * n + s) * predicted_a(n, s, beta) + s * predicted_b(n, s, beta),
                    oracle_scalar(n, s, beta), 1e-15);
        EXPECT_NEAR(predicted_a(n, s, beta) + predicted_b(n, s, beta), oracle_ricci_base(n, beta), 1e-15);
      }
}

TEST(Curvature, WarpedScalarAndCharacteristicRicci) {
  auto st = warped(1, 2, 1);
  for (const auto& p : plan_for(st).points) {
    auto geo = geometry_at(st.m, p, h);
    EXPECT_NEAR(geo.scalar, oracle_scalar(1, 2, 1), 1e-4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        EXPECT_NEAR(geo.ric(i, j), oracle_ricci_base(1, 1), 1e-4);
  }
}

TEST(Curvature, RicciXiValues) {
  struct c { int n, s; real beta, want; };
  for (auto k : {c{1, 2, 1, -2}, c{2, 1, 1, -4}, c{1, 2, 2, -8}}) {
    auto st = warped(k.n, k.s, k.beta);
    auto res = check_ricci_xi(st, plan_for(st, 3), tol, h);
    expect_all_pass(res);
    auto geo = geometry_at(st.m, plan_for(st, 3).points[1], h);
    EXPECT_NEAR(st.xi[0](geo.p).dot(geo.ric * st.xi[k.s - 1](geo.p)), k.want, 1e-4);
  }
}

TEST(Curvature, CurvatureXiPassesAtBetaOneAndTwo) {
  for (real beta : {1.0L, 2.0L}) {
    auto st = warped(1, 2, beta);
    expect_all_pass(check_curvature_xi(st, plan_for(st), tol, h));
  }
}

TEST(Curvature, CurvatureXiOnDVanishes) {
  auto st = warped(1, 2, 1);
  point p = plan_for(st).points[0];
  auto geo = geometry_at(st.m, p, h);
  vec x = basis(4, 2), y = basis(4, 3);
  EXPECT_LT(max_abs(geo.riemann(x, y, st.xi[0](p))), 1e-4);
  // xi_j against a D vector: beta^2 {etabar(xi_j) Y - ...} = Y for s=2 at beta=1
  vec r = geo.riemann(st.xi[1](p), x, st.xi[0](p));
  EXPECT_LT(max_abs(vec(r - x)), 1e-4);
}

TEST(Curvature, NablaRicciAndScalarDerivative) {
  auto st = warped(1, 2, 1);
  auto plan = plan_for(st, 3);
  expect_all_pass(check_nabla_ricci(st, plan, tol, h));
  expect_all_pass(check_scalar_derivative(st, plan, tol, h));
  auto st2 = warped(1, 2, 2);
  expect_all_pass(check_scalar_derivative(st2, plan_for(st2, 3), tol, h));
}

TEST(Curvature, LieXiChain) {
  auto st = warped(1, 2, 1);
  auto res = lie_xi_suite(st, plan_for(st, 3), tol, h);
  expect_all_pass(res);
  EXPECT_EQ(get(res, "lie_xi.connection_routes").category, residual_category::engine);
}

TEST(Curvature, LieXiRicciOnUnitDVector) {
  auto st = warped(1, 2, 1);
  point p = plan_for(st).points[2];
  auto ng = nested_geometry_at(st.m, p, h);
  auto lrt = lie_derivative_curvature(st.m, ng, st.xi[0]);
  mat lric = ricci_contraction(lrt);
  real sigma = std::exp(p[0] + p[1]);
  vec y = basis(4, 2) / sigma;  // unit D vector
  EXPECT_NEAR(y.dot(lric * y), -8, 5e-3);
  vec xi = st.xi[1](p);
  EXPECT_NEAR(xi.dot(lric * xi), 0, 5e-3);
}

TEST(Curvature, EtaEinsteinFitWarped) {
  auto st = warped(1, 2, 1);
  auto res = eta_einstein_check(st, plan_for(st), tol, h);
  EXPECT_TRUE(res.pass());
  expect_all_pass(res.conclusions);
  EXPECT_NEAR(find_constant(res.constants, "a")->value, -4, 1e-4);
  EXPECT_NEAR(find_constant(res.constants, "b")->value, 2, 1e-4);
  EXPECT_NEAR(find_constant(res.constants, "r")->value, -12, 1e-4);
}

TEST(Curvature, ClassicalCollapsesToEinstein) {
  auto st = warped(1, 1, 1);
  auto res = xi_parallel_ricci_verify(st, plan_for(st), tol, h);
  ASSERT_TRUE(res.applicable) << res.note;
  EXPECT_TRUE(res.pass());
  EXPECT_NEAR(find_constant(res.constants, "b")->value, 0, 1e-4);
  EXPECT_NEAR(find_constant(res.constants, "a")->value, -2, 1e-4);
  // hyperbolic 3-space: Ric = -2 g, r = -6
  EXPECT_NEAR(find_constant(res.constants, "r")->value, -6, 1e-4);
}

TEST(Curvature, ParallelRicciTheoremOnWeakWarped) {
  auto st = make(2, 2, {2, 1}, "exp(t_1+t_2)", "1");
  auto res = xi_parallel_ricci_verify(st, plan_for(st, 2), tol, h);
  ASSERT_TRUE(res.applicable) << res.note;
  EXPECT_TRUE(res.pass());
  EXPECT_NEAR(find_constant(res.constants, "r")->value, oracle_scalar(2, 2, 1), 1e-4);
}

TEST(Curvature, TwistedIsGated) {
  auto st = make(1, 2, {1}, "exp((1+0.1*x_1^2)*(t_1+t_2))", "1+0.1*x_1^2");
  auto plan = plan_for(st, 2);
  try {
    check_curvature_xi(st, plan, tol, h);
    FAIL() << "expected gated error";
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::gated);
  }
  EXPECT_THROW(lie_xi_suite(st, plan, tol, h), error);
  EXPECT_THROW(xi_parallel_ricci_verify(st, plan, tol, h), error);
}

TEST(Curvature, BrokenWarpingDetected) {
  auto st = make(1, 2, {1}, "exp(t_1+2*t_2)", "1", false);
  auto plan = plan_for(st, 3);
  EXPECT_FALSE(get(check_curvature_xi(st, plan, tol, h), "curvature.r_xi").pass);
  EXPECT_FALSE(get(check_ricci_xi(st, plan, tol, h), "curvature.ricci_xi").pass);
  EXPECT_FALSE(get(check_nabla_ricci(st, plan, tol, h), "curvature.nabla_xi_ricci").pass);
  auto lie = lie_xi_suite(st, plan, tol, h);
  EXPECT_FALSE(get(lie, "lie_xi.metric").pass);
  // engine cross-checks do not depend on the structure being Kenmotsu
  EXPECT_TRUE(get(lie, "lie_xi.connection_routes").pass);
  EXPECT_TRUE(get(lie, "lie_xi.ricci_operator_routes").pass);
}

TEST(Curvature, ParallelRicciHypothesisGate) {
  // non-homogeneous base direction breaks nabla_xi Ric^sharp = 0
  auto st = make(1, 1, {1}, "exp(t_1+0.3*t_1^2)", "1", false);
  auto res = xi_parallel_ricci_verify(st, plan_for(st), tol, h);
  EXPECT_FALSE(res.applicable);
  EXPECT_TRUE(res.pass());
  EXPECT_EQ(res.hypotheses.front().category, residual_category::hypothesis);
}
