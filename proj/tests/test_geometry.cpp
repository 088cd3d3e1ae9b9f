#include "kenlab/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kenlab;

namespace {

const real h = 1e-3L;

charted_manifold euclidean(int n) {
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) names.push_back("u_" + std::to_string(a + 1));
  return charted_manifold(n, names, [n](const point&) { return mat(mat::Identity(n, n)); });
}

// dt^2 + e^{2 beta t}(dx^2 + dy^2): hyperbolic space of curvature -beta^2.
charted_manifold hyperbolic3(real beta = 1) {
  return charted_manifold(3, {"t", "x", "y"}, [beta](const point& p) {
    mat g = mat::Identity(3, 3);
    real s = std::exp(2 * beta * p[0]);
    g(1, 1) = g(2, 2) = s;
    return g;
  });
}

// sum dt_i^2 + e^{2(t_1 + t_2)}(dx_1^2 + dx_2^2)
charted_manifold warped_n1s2() {
  return charted_manifold(4, {"t_1", "t_2", "x_1", "x_2"}, [](const point& p) {
    mat g = mat::Identity(4, 4);
    real s = std::exp(2 * (p[0] + p[1]));
    g(2, 2) = g(3, 3) = s;
    return g;
  });
}

// A metric with no symmetries, for consistency checks between routes.
charted_manifold lumpy() {
  return charted_manifold(3, {"a", "b", "c"}, [](const point& p) {
    mat g(3, 3);
    g << 2 + std::sin(p[0]) * p[1], 0.3 * p[2], 0.1 * std::cos(p[1]),  //
        0.3 * p[2], 1.5 + p[0] * p[0], 0.2 * p[0] * p[1],             //
        0.1 * std::cos(p[1]), 0.2 * p[0] * p[1], 1 + std::exp(0.4 * p[2]);
    return g;
  });
}

real sectional(const local_geometry& geo, const vec& x, const vec& y) {
  real num = geo.ip(geo.riemann(x, y, y), x);
  real den = geo.ip(x, x) * geo.ip(y, y) - geo.ip(x, y) * geo.ip(x, y);
  return num / den;
}

sample_plan plan_for(const charted_manifold& m, int count = 10) {
  return sample_plan::make(m, 42, count, h);
}

}  // namespace

TEST(Geometry, EuclideanIsFlat) {
  auto m = euclidean(4);
  auto geo = geometry_at(m, point::Constant(4, 0.1L), h);
  EXPECT_EQ(geo.gamma.max_abs(), 0);
  EXPECT_EQ(geo.riem.max_abs(), 0);
  EXPECT_EQ(max_abs(geo.ric), 0);
  EXPECT_EQ(geo.scalar, 0);
}

TEST(Geometry, ChristoffelOfExponentialWarp) {
  auto m = hyperbolic3();
  auto geo = geometry_at(m, point::Zero(3), h);
  EXPECT_NEAR(geo.gamma(1, 0, 1), 1, 1e-10);
  EXPECT_NEAR(geo.gamma(0, 1, 1), -1, 1e-10);
  EXPECT_NEAR(geo.gamma(0, 2, 2), -1, 1e-10);
  EXPECT_NEAR(geo.gamma(0, 0, 0), 0, 1e-12);
}

TEST(Geometry, ChristoffelSymmetricExactly) {
  auto m = lumpy();
  for (const auto& p : plan_for(m).points) {
    auto geo = geometry_at(m, p, h);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) EXPECT_EQ(geo.gamma(a, b, c), geo.gamma(a, c, b));
  }
}

TEST(Geometry, HyperbolicSectionalCurvature) {
  auto m = hyperbolic3();
  auto plan = plan_for(m);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(m, p, h);
    for (int i = 0; i < 3; ++i) {
      vec x = plan.probes[i](p), y = plan.probes[(i + 1) % 3](p);
      EXPECT_NEAR(sectional(geo, x, y), -1, 1e-6);
    }
    EXPECT_NEAR(geo.scalar, -6, 1e-6);
  }
}

TEST(Geometry, HyperbolicScaledCurvature) {
  auto m = hyperbolic3(0.7L);
  auto geo = geometry_at(m, point::Constant(3, 0.2L), h);
  EXPECT_NEAR(geo.scalar, -6 * 0.49, 1e-6);
}

TEST(Geometry, WarpedProductScalarCurvature) {
  auto m = warped_n1s2();
  for (const auto& p : plan_for(m).points) {
    auto geo = geometry_at(m, p, h);
    EXPECT_NEAR(geo.scalar, -12, 1e-6);
    EXPECT_LT(max_abs(geo.ric - geo.ric.transpose()), 1e-8);
  }
}

TEST(Geometry, CurvatureSymmetries) {
  auto m = lumpy();
  auto plan = plan_for(m);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(m, p, h);
    vec x = plan.probes[0](p), y = plan.probes[1](p), z = plan.probes[2](p);
    EXPECT_EQ(max_abs(geo.riemann(x, y, z) + geo.riemann(y, x, z)), 0);
    vec bianchi = geo.riemann(x, y, z) + geo.riemann(y, z, x) + geo.riemann(z, x, y);
    EXPECT_LT(max_abs(bianchi), 1e-6);
    EXPECT_LT(max_abs(geo.ric - geo.ric.transpose()), 1e-6);
    EXPECT_LT(max_abs(geo.g * geo.ric_sharp - geo.ric), 1e-12);
    // pair symmetry g(R_{X,Y}Z, W) = g(R_{Z,W}X, Y)
    vec w = plan.probes[0](p + vec::Constant(3, 0.01L));
    EXPECT_NEAR(geo.ip(geo.riemann(x, y, z), w), geo.ip(geo.riemann(z, w, x), y), 1e-6);
  }
}

TEST(Geometry, MetricCompatibility) {
  auto m = lumpy();
  for (const auto& p : plan_for(m).points) {
    auto geo = geometry_at(m, p, h);
    auto ng = geo.covariant_02(geo.g, geo.dg);
    for (const auto& c : ng) EXPECT_LT(max_abs(c), 1e-12);
  }
}

TEST(Geometry, ConstantFieldOnFlatSpace) {
  auto m = euclidean(3);
  vec v(3);
  v << 0.3, -1, 2;
  auto field = constant_field(v);
  point p = point::Constant(3, 0.1L);
  auto ng = nested_geometry_at(m, p, h);
  EXPECT_EQ(max_abs(lie_derivative_metric(m, ng.center, field)), 0);
  EXPECT_EQ(lie_derivative_connection(m, ng.center, field).max_abs(), 0);
  EXPECT_EQ(lie_derivative_connection_transport(m, ng.center, field).max_abs(), 0);
  EXPECT_EQ(lie_derivative_curvature(m, ng, field).max_abs(), 0);
}

TEST(Geometry, RotationIsKillingOnHyperbolicSpace) {
  auto m = hyperbolic3();
  vector_field rot = [](const point& p) {
    vec v(3);
    v << 0, -p[2], p[1];
    return v;
  };
  for (const auto& p : plan_for(m, 4).points) {
    auto ng = nested_geometry_at(m, p, h);
    EXPECT_LT(max_abs(lie_derivative_metric(m, ng.center, rot)), 1e-9);
    EXPECT_LT(lie_derivative_connection(m, ng.center, rot).max_abs(), 1e-7);
    EXPECT_LT(lie_derivative_connection_transport(m, ng.center, rot).max_abs(), 1e-7);
    EXPECT_LT(lie_derivative_curvature(m, ng, rot).max_abs(), 1e-5);
  }
}

TEST(Geometry, LieDerivativeOfMetricAlongT) {
  // L_{d_t} g = diag(0, 2e^{2t}, 2e^{2t})
  auto m = hyperbolic3();
  for (const auto& p : plan_for(m).points) {
    auto geo = geometry_at(m, p, h);
    mat expect = mat::Zero(3, 3);
    expect(1, 1) = expect(2, 2) = 2 * std::exp(2 * p[0]);
    EXPECT_LT(max_abs(lie_derivative_metric(m, geo, coordinate_field(3, 0)) - expect), 1e-9);
  }
}

TEST(Geometry, LieDerivativeOfConnectionTwoRoutesAgree) {
  auto m = lumpy();
  auto plan = plan_for(m, 6);
  for (const auto& p : plan.points) {
    auto geo = geometry_at(m, p, h);
    for (int k = 0; k < 3; ++k) {
      auto ff = lie_derivative_connection(m, geo, plan.probe(k));
      auto tr = lie_derivative_connection_transport(m, geo, plan.probe(k));
      EXPECT_LT((ff - tr).max_abs(), 1e-6);
      EXPECT_GT(ff.max_abs(), 1e-2);
    }
  }
}

TEST(Geometry, LieDerivativeOfCurvatureMatchesComponentFormula) {
  // (L_V R)^a_{bcd} = V^e d_e R^a_{bcd} - R^e_{bcd} d_e V^a + R^a_{ecd} d_b V^e
  //                 + R^a_{bed} d_c V^e + R^a_{bce} d_d V^e
  auto m = lumpy();
  auto plan = plan_for(m, 3);
  for (const auto& p : plan.points) {
    auto ng = nested_geometry_at(m, p, h);
    auto v = plan.probe(1);
    vec vp = v(p);
    mat j = jacobian(m, v, p, h);
    auto dr = ng.partials([](const local_geometry& g) { return g.riem; });
    const auto& r = ng.center.riem;
    tensor4 expect(3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) {
            real t = 0;
            for (int e = 0; e < 3; ++e)
              t += vp[e] * dr[e](a, b, c, d) - r(e, b, c, d) * j(a, e) + r(a, e, c, d) * j(e, b) +
                   r(a, b, e, d) * j(e, c) + r(a, b, c, e) * j(e, d);
            expect(a, b, c, d) = t;
          }
    auto got = lie_derivative_curvature(m, ng, v);
    EXPECT_LT((got - expect).max_abs(), 1e-5);
    EXPECT_GT(expect.max_abs(), 1e-2);
  }
}

TEST(Geometry, LieBracketOfPolynomialFields) {
  auto m = euclidean(2);
  vector_field x = [](const point& p) {
    vec v(2);
    v << p[1], 0;
    return v;
  };
  vector_field y = [](const point& p) {
    vec v(2);
    v << 0, p[0] * p[0];
    return v;
  };
  // [y d_x, x^2 d_y] = y * 0 ... = (y d_x)(x^2) d_y - (x^2 d_y)(y) d_x = 2xy d_y - x^2 d_x
  point p(2);
  p << 0.2, -0.3;
  vec expect(2);
  expect << -0.04, 2 * 0.2 * -0.3;
  EXPECT_LT(max_abs(lie_bracket(m, x, y, p, h) - expect), 1e-14);
}

TEST(Geometry, ExteriorDerivatives) {
  auto m = euclidean(3);
  auto plan = plan_for(m);
  covector_field dt = [](const point&) { return vec(basis(3, 0)); };
  // omega = u_1 du_2: d omega = 1/2 (X^1 Y^2 - X^2 Y^1) with the half normalization
  covector_field w = [](const point& p) {
    vec v = vec::Zero(3);
    v[1] = p[0];
    return v;
  };
  // Phi = u_3 du_1 ^ du_2 as a matrix; d Phi(X,Y,Z) = det(X,Y,Z) / 3
  form2_field phi = [](const point& p) {
    mat f = mat::Zero(3, 3);
    f(0, 1) = p[2];
    f(1, 0) = -p[2];
    return f;
  };
  for (const auto& p : plan.points) {
    auto x = plan.probe(0), y = plan.probe(1), z = plan.probe(2);
    EXPECT_LT(std::fabs(exterior_derivative_1form(m, dt, x, y, p, h)), 1e-12);
    vec xp = x(p), yp = y(p), zp = z(p);
    EXPECT_NEAR(exterior_derivative_1form(m, w, x, y, p, h), (xp[0] * yp[1] - xp[1] * yp[0]) / 2,
                1e-10);
    mat xyz(3, 3);
    xyz << xp, yp, zp;
    EXPECT_NEAR(exterior_derivative_2form(m, phi, x, y, z, p, h), xyz.determinant() / 3, 1e-10);
  }
}

TEST(Geometry, NijenhuisIdentityAndRoutes) {
  auto m = lumpy();
  auto plan = plan_for(m, 5);
  tensor11_field id = [](const point&) { return mat(mat::Identity(3, 3)); };
  tensor11_field s = [](const point& p) {
    mat t(3, 3);
    t << p[0], 1 + p[1] * p[2], 0.5, -p[2], std::sin(p[0]), p[1], 0.3, p[0] * p[1], 1;
    return t;
  };
  for (const auto& p : plan.points) {
    auto x = plan.probe(0), y = plan.probe(1);
    EXPECT_EQ(max_abs(nijenhuis(m, id, x, y, p, h)), 0);
    auto geo = geometry_at(m, p, h);
    vec bracket = nijenhuis(m, s, x, y, p, h);
    vec cov = nijenhuis_covariant(m, geo, s, x(p), y(p));
    EXPECT_LT(max_abs(bracket - cov), 1e-9);
    EXPECT_GT(max_abs(bracket), 1e-2);
    EXPECT_LT(max_abs(bracket + nijenhuis(m, s, y, x, p, h)), 1e-12);
  }
}

TEST(Geometry, LieDerivativeOfCovector) {
  // V = u_1 d_2 on R^3, omega = du_2: L_V omega = d(omega(V)) = du_1
  auto m = euclidean(3);
  vector_field v = [](const point& p) {
    vec r = vec::Zero(3);
    r[1] = p[0];
    return r;
  };
  covector_field w = [](const point&) { return vec(basis(3, 1)); };
  EXPECT_LT(max_abs(lie_derivative_covector(m, v, w, point::Constant(3, 0.1L), h) - basis(3, 0)),
            1e-12);
}

TEST(Geometry, FourthOrderConvergence) {
  // error of the scalar curvature of hyperbolic space falls by ~16 per halving
  auto m = hyperbolic3();
  point p(3);
  p << 0.21, -0.13, 0.37;
  real e1 = std::fabs(geometry_at(m, p, 2e-2L).scalar + 6);
  real e2 = std::fabs(geometry_at(m, p, 1e-2L).scalar + 6);
  EXPECT_GT(e1 / e2, 12);
  EXPECT_LT(e1 / e2, 20);
}

TEST(Geometry, BoundaryClearanceIsEnforced) {
  auto m = hyperbolic3();
  point p = point::Constant(3, 0.4995L);
  try {
    geometry_at(m, p, h);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::boundary);
  }
}

TEST(Geometry, DegenerateMetricIsReported) {
  charted_manifold m(2, {"a", "b"}, [](const point& p) {
    mat g = mat::Identity(2, 2);
    g(1, 1) = p[0];
    return g;
  });
  try {
    geometry_at(m, point::Zero(2), h);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::degenerate_metric);
  }
}

TEST(Geometry, SamplePlanIsReproducible) {
  auto m = lumpy();
  auto a = sample_plan::make(m, 7, 20, h);
  auto b = sample_plan::make(m, 7, 20, h);
  auto c = sample_plan::make(m, 8, 20, h);
  for (int k = 0; k < 20; ++k) {
    EXPECT_EQ(a.points[k], b.points[k]);
    for (int d = 0; d < 3; ++d) {
      EXPECT_GE(a.points[k][d], -0.5 + 8 * h);
      EXPECT_LE(a.points[k][d], 0.5 - 8 * h);
    }
  }
  EXPECT_EQ(a.probes[2].coeff, b.probes[2].coeff);
  EXPECT_NE(a.points[0], c.points[0]);
  for (real x : a.probes[0].coeff) {
    EXPECT_GE(x, -1);
    EXPECT_LE(x, 1);
  }
}

TEST(Geometry, DimensionLimit) {
  EXPECT_THROW(euclidean(13), error);
  EXPECT_NO_THROW(euclidean(12));
}
