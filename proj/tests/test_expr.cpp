#include "kenlab/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace kenlab;

namespace {

std::vector<std::string> coords(int n, int s) { return coordinate_names(n, s); }

double eval(const expr& e, std::vector<double> x) { return e.evaluate_raw<double>(x.data()); }

}  // namespace

TEST(Expr, SumOfCoordinatesAtOrigin) {
  auto e = expr::parse("exp(1*(t_1+t_2))", coords(1, 2));
  EXPECT_EQ(eval(e, {0, 0, 0, 0}), 1.0);
}

TEST(Expr, PowerIsRightAssociative) {
  auto e = expr::parse("2^3^2", {});
  EXPECT_EQ(eval(e, {}), 512.0);
  EXPECT_TRUE(e.is_constant());
}

TEST(Expr, Precedence) {
  EXPECT_EQ(eval(expr::parse("1+2*3", {}), {}), 7.0);
  EXPECT_EQ(eval(expr::parse("(1+2)*3", {}), {}), 9.0);
  EXPECT_EQ(eval(expr::parse("-2^2", {}), {}), -4.0);
  EXPECT_EQ(eval(expr::parse("(-2)^2", {}), {}), 4.0);
  EXPECT_EQ(eval(expr::parse("8/4/2", {}), {}), 1.0);
  EXPECT_EQ(eval(expr::parse("8-4-2", {}), {}), 2.0);
  EXPECT_EQ(eval(expr::parse("2^-1", {}), {}), 0.5);
  EXPECT_EQ(eval(expr::parse("--3", {}), {}), 3.0);
}

TEST(Expr, UnknownIdentifierNamesTheCoordinate) {
  try {
    expr::parse("exp(t_3)", coords(1, 2));
    FAIL() << "expected unknown identifier";
  } catch (const expr_error& e) {
    EXPECT_EQ(e.name(), "t_3");
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.kind(), error_kind::config);
  }
}

TEST(Expr, SyntaxErrorReportsOffsetAndExpectedSet) {
  try {
    expr::parse("1 + * 2", {});
    FAIL();
  } catch (const expr_error& e) {
    EXPECT_EQ(e.offset(), 4u);
    auto& ex = e.expected();
    EXPECT_NE(std::find(ex.begin(), ex.end(), "number"), ex.end());
    EXPECT_NE(std::find(ex.begin(), ex.end(), "("), ex.end());
  }
  try {
    expr::parse("(t_1", coords(1, 1));
    FAIL();
  } catch (const expr_error& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_NE(std::find(e.expected().begin(), e.expected().end(), ")"), e.expected().end());
  }
  EXPECT_THROW(expr::parse("", {}), expr_error);
  EXPECT_THROW(expr::parse("2 t_1", coords(1, 1)), expr_error);
  EXPECT_THROW(expr::parse("exp t_1", coords(1, 1)), expr_error);
  EXPECT_THROW(expr::parse("1e", {}), expr_error);
}

TEST(Expr, NoImplicitMultiplication) {
  EXPECT_THROW(expr::parse("2x_1", coords(1, 1)), expr_error);
  EXPECT_THROW(expr::parse("(1)(2)", {}), expr_error);
}

TEST(Expr, WarpingFromTheExample) {
  auto e = expr::parse("1*exp(1*(t_1+t_2))", coords(1, 2));
  EXPECT_NEAR(eval(e, {0.1, 0.2, 0.7, -0.3}), 1.3498588075760032, 1e-15);
}

TEST(Expr, DomainFaults) {
  auto names = coords(1, 1);
  try {
    eval(expr::parse("log(t_1)", names), {-1, 0, 0});
    FAIL();
  } catch (const expr_error& e) {
    EXPECT_EQ(e.kind(), error_kind::domain);
    EXPECT_EQ(e.offset(), 0u);
  }
  try {
    eval(expr::parse("x_1/ (t_1 - t_1)", names), {0.3, 1, 0});
    FAIL();
  } catch (const expr_error& e) {
    EXPECT_EQ(e.kind(), error_kind::domain);
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_NE(std::string(e.what()).find("division by zero"), std::string::npos);
  }
  EXPECT_THROW(eval(expr::parse("sqrt(t_1)", names), {-0.5, 0, 0}), expr_error);
  EXPECT_THROW(eval(expr::parse("exp(t_1*1000)", names), {1, 0, 0}), expr_error);
  EXPECT_THROW(eval(expr::parse("t_1^0.5", names), {-2, 0, 0}), expr_error);
}

TEST(Expr, ExactConstantsFoldInexactOnesStay) {
  auto a = expr::parse("1+2*3", {});
  EXPECT_EQ(a.root().op, expr_op::num);
  EXPECT_EQ(a.root().value, 7.0);
  auto b = expr::parse("1/3", {});
  EXPECT_EQ(b.root().op, expr_op::div);
  EXPECT_EQ(eval(b, {}), 1.0 / 3.0);
  auto c = expr::parse("0.1+0.2", {});
  EXPECT_EQ(c.root().op, expr_op::add);
  auto d = expr::parse("0.5*3", {});
  EXPECT_EQ(d.root().op, expr_op::num);
  EXPECT_EQ(expr::parse("exp(0)", {}).root().op, expr_op::exp);
  EXPECT_EQ(expr::parse("1e308*10", {}).root().op, expr_op::mul);
  auto e = expr::parse("-0.1", {});
  EXPECT_EQ(e.root().op, expr_op::num);
  EXPECT_EQ(e.root().value, -0.1);
}

TEST(Expr, PrinterIsFullyParenthesized) {
  auto names = coords(1, 2);
  EXPECT_EQ(expr::parse("1+t_1*x_2", names).print(), "(1 + (t_1 * x_2))");
  EXPECT_EQ(expr::parse("-t_1^2", names).print(), "(-(t_1 ^ 2))");
  EXPECT_EQ(expr::parse("exp(-0.1*t_2)", names).print(), "exp(((-0.1) * t_2))");
  EXPECT_EQ(expr::parse("1/3", names).print(), "(1 / 3)");
}

TEST(Expr, VariablesAndConstness) {
  auto names = coords(1, 2);
  auto e = expr::parse("exp(t_1+t_2)", names);
  EXPECT_EQ(e.variables(), (std::set<int>{0, 1}));
  auto f = expr::parse("1+0.1*x_1^2", names);
  EXPECT_EQ(f.variables(), (std::set<int>{2}));
  EXPECT_FALSE(f.is_constant());
  EXPECT_TRUE(expr::parse("3", names).is_constant());
}

TEST(Expr, LongDoubleEvaluationTracksDouble) {
  auto names = coords(1, 2);
  auto e = expr::parse("exp((1+0.1*x_1^2)*(t_1+t_2))*sin(x_2)/sqrt(2+cos(t_1))", names);
  std::vector<double> xd{0.1, -0.2, 0.3, 0.4};
  std::vector<long double> xl(xd.begin(), xd.end());
  EXPECT_NEAR(static_cast<double>(e.evaluate_raw<long double>(xl.data())), eval(e, xd), 1e-14);
}

// Random well-formed expression generator for the fuzz and round-trip properties.
namespace {

std::string random_expr(std::mt19937_64& rng, int depth, const std::vector<std::string>& names) {
  std::uniform_int_distribution<int> pick(0, 9);
  int k = depth <= 0 ? pick(rng) % 2 : pick(rng);
  static const char* funcs[] = {"exp", "log", "sin", "cos", "sqrt"};
  static const char* ops[] = {"+", "-", "*", "/", "^"};
  switch (k) {
    case 0: {
      std::uniform_real_distribution<double> u(-3, 3);
      double v = std::round(u(rng) * 8) / 8;
      if (pick(rng) < 3) v = u(rng);
      auto s = detail::format_number(std::fabs(v));
      return v < 0 ? "(-" + s + ")" : s;
    }
    case 1: return names[rng() % names.size()];
    case 2: return "-" + random_expr(rng, depth - 1, names);
    case 3:
    case 4: return std::string(funcs[rng() % 5]) + "(" + random_expr(rng, depth - 1, names) + ")";
    case 5: return "(" + random_expr(rng, depth - 1, names) + ")";
    default:
      return random_expr(rng, depth - 1, names) + " " + ops[rng() % 5] + " " +
             random_expr(rng, depth - 1, names);
  }
}

}  // namespace

TEST(Expr, FuzzParsesAndFaultsAreStructured) {
  auto names = coords(1, 2);
  std::mt19937_64 rng(7);
  int faults = 0, ok = 0;
  for (int i = 0; i < 3000; ++i) {
    auto text = random_expr(rng, 6, names);
    expr e;
    ASSERT_NO_THROW(e = expr::parse(text, names)) << text;
    std::vector<double> x{0.3, -0.2, 0.1, 0.45};
    try {
      double v = eval(e, x);
      EXPECT_TRUE(std::isfinite(v));
      ++ok;
    } catch (const expr_error& err) {
      EXPECT_EQ(err.kind(), error_kind::domain) << text;
      ++faults;
    }
  }
  EXPECT_GT(ok, 100);
}

TEST(Expr, RoundTripIsStructuralAndPrintIsAFixedPoint) {
  auto names = coords(2, 2);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto e = expr::parse(random_expr(rng, 6, names), names);
    auto printed = e.print();
    auto again = expr::parse(printed, names);
    EXPECT_TRUE(same_structure(e.root(), again.root())) << printed;
    EXPECT_EQ(again.print(), printed);
  }
}
