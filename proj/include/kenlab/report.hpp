#pragma once

// Orchestration of the verification suites and the JSON report.

#include "kenlab/config.hpp"
#include "kenlab/constructions.hpp"
#include "kenlab/curvature_identities.hpp"
#include "kenlab/soliton.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kenlab {

inline constexpr int report_format_version = 1;

struct built_structure {
  weak_kaehler_fiber fiber;
  warping_spec warping;
  weak_f_structure st;
};

namespace detail {

inline tensor11_field expr_matrix_field(const std::vector<std::vector<std::string>>& text,
                                        const std::vector<std::string>& names, const std::string& path) {
  const int size = static_cast<int>(text.size());
  std::vector<expr> cells;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      try {
        cells.push_back(expr::parse(text[r][c], names));
      } catch (const error& e) {
        throw error(error_kind::config, "config field \"" + path + "[" + std::to_string(r) + "][" +
                                            std::to_string(c) + "]\": " + e.what());
      }
    }
  return [cells, size](const point& x) {
    mat out(size, size);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) out(r, c) = cells[static_cast<std::size_t>(r * size + c)].evaluate(x);
    return out;
  };
}

inline expr parse_field(const std::string& text, const std::vector<std::string>& names, const std::string& path) {
  try {
    return expr::parse(text, names);
  } catch (const error& e) {
    throw error(error_kind::config, "config field \"" + path + "\": " + e.what());
  }
}

}  // namespace detail

inline weak_kaehler_fiber build_fiber(const run_config& c) {
  if (c.flat_fiber) return build_flat_fiber(c.n, c.lambdas);
  std::vector<std::string> names;
  for (int a = 1; a <= 2 * c.n; ++a) names.push_back("x_" + std::to_string(a));
  weak_kaehler_fiber fb;
  fb.n = c.n;
  fb.metric = detail::expr_matrix_field(c.fiber_metric, names, "fiber.user.metric");
  fb.j = detail::expr_matrix_field(c.fiber_j, names, "fiber.user.j");
  return fb;
}

inline vec box_lo(const run_config& c) { return vec::Constant(2 * c.n + c.s, c.lo); }
inline vec box_hi(const run_config& c) { return vec::Constant(2 * c.n + c.s, c.hi); }

inline built_structure build_structure(const run_config& c) {
  auto names = coordinate_names(c.n, c.s);
  auto fb = build_fiber(c);
  auto w = make_warping(detail::parse_field(c.sigma, names, "sigma"), c.s);
  product_options opt;
  if (c.beta) opt.beta = detail::parse_field(*c.beta, names, "beta");
  opt.check_warping = c.check_warping;
  opt.h = c.h;
  opt.lo = box_lo(c);
  opt.hi = box_hi(c);
  auto st = build_twisted_product(c.s, fb, w, opt);
  if (c.faults.q_xi) st = perturb_q_on_xi(st, *c.faults.q_xi);
  if (c.faults.fiber_scale) st = scale_metric_on_first_fiber_direction(st, *c.faults.fiber_scale);
  return {fb, w, st};
}

inline soliton_spec build_soliton_spec(const run_config& c, const weak_f_structure& st) {
  const auto& sc = *c.soliton;
  soliton_spec spec;
  if (sc.delta) {
    spec = collinear_potential(st, detail::parse_field(*sc.delta, st.m.coords(), "soliton.potential.delta"));
  } else {
    std::vector<expr> comps;
    for (std::size_t a = 0; a < sc.components.size(); ++a)
      comps.push_back(detail::parse_field(sc.components[a], st.m.coords(),
                                          "soliton.potential.components[" + std::to_string(a) + "]"));
    spec = component_potential(comps);
  }
  spec.lambda = sc.lambda;
  spec.mu = sc.mu;
  return spec;
}

// --- exit codes -------------------------------------------------------------------

enum exit_code : int { exit_pass = 0, exit_residual = 1, exit_input = 2, exit_internal = 3 };

/// Input problems map to 2, numerical faults to 3.
inline int exit_code_for(error_kind k) {
  switch (k) {
    case error_kind::config:
    case error_kind::precondition:
    case error_kind::domain:
    case error_kind::degenerate_metric:
    case error_kind::gated:
      return exit_input;
    case error_kind::boundary:
    case error_kind::underdetermined:
    case error_kind::internal:
      return exit_internal;
  }
  return exit_internal;
}

inline const char* error_kind_key(error_kind k) {
  switch (k) {
    case error_kind::config: return "config";
    case error_kind::domain: return "domain";
    case error_kind::boundary: return "boundary";
    case error_kind::degenerate_metric: return "degenerate_metric";
    case error_kind::gated: return "gated";
    case error_kind::precondition: return "precondition";
    case error_kind::underdetermined: return "underdetermined";
    case error_kind::internal: return "internal";
  }
  return "internal";
}

/// 3 dominates 1, which dominates 2.
inline int combine_exit(int a, int b) {
  auto rank = [](int c) { return c == exit_internal ? 3 : c == exit_residual ? 2 : c == exit_input ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

// --- JSON -------------------------------------------------------------------------

inline json number_json(real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return static_cast<double>(v);
}

inline json point_json(const point& p) {
  json out = json::array();
  for (Eigen::Index a = 0; a < p.size(); ++a) out.push_back(static_cast<double>(p[a]));
  return out;
}

inline json residual_json(const residual_field& r) {
  return json{{"name", r.name},
              {"description", r.description},
              {"category", to_string(r.category)},
              {"comparison", r.cmp == comparison::below ? "max_below" : "min_above"},
              {"value", number_json(r.max_abs)},
              {"tolerance", number_json(r.tolerance)},
              {"pass", r.pass},
              {"at", point_json(r.argmax)},
              {"evaluations", r.evaluations}};
}

inline json residuals_json(const residual_list& list) {
  json out = json::array();
  for (const auto& r : list) out.push_back(residual_json(r));
  return out;
}

inline json constant_json(const fitted_constant& c) {
  json out{{"name", c.name}, {"value", number_json(c.value)}, {"pass", c.pass}};
  if (c.predicted) {
    out["predicted"] = number_json(*c.predicted);
    out["delta"] = number_json(c.value - *c.predicted);
    out["tolerance"] = number_json(c.tolerance);
  } else {
    out["predicted"] = nullptr;
  }
  return out;
}

inline json check_json(const theorem_check& c) {
  json consts = json::array();
  for (const auto& k : c.constants) consts.push_back(constant_json(k));
  json out{{"name", c.name},
           {"applicable", c.applicable},
           {"pass", c.pass()},
           {"hypotheses", residuals_json(c.hypotheses)},
           {"conclusions", residuals_json(c.conclusions)},
           {"constants", consts}};
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

inline json tolerances_json(const tolerances& t) {
  return json{{"id", number_json(t.id)}, {"d1", number_json(t.d1)}, {"d2", number_json(t.d2)},
              {"d3", number_json(t.d3)}};
}

// --- suites -----------------------------------------------------------------------

struct suite_outcome {
  std::string name;
  std::string status = "pass";  // pass, fail, skipped, gated, error
  std::string note;
  residual_list residuals;
  std::vector<theorem_check> checks;
  std::vector<fitted_constant> constants;
  std::optional<error_kind> failure;
  std::string failure_message;
  double seconds = 0;

  /// Failing identity/engine residuals or applicable checks.
  bool residual_failure() const {
    for (const auto& r : residuals)
      if (!r.pass && r.category != residual_category::hypothesis) return true;
    for (const auto& c : checks)
      if (!c.pass()) return true;
    for (const auto& c : constants)
      if (!c.pass) return true;
    return false;
  }

  bool hypothesis_failure() const {
    for (const auto& r : residuals)
      if (!r.pass && r.category == residual_category::hypothesis) return true;
    return false;
  }

  int exit_contribution() const {
    int code = exit_pass;
    if (failure) code = combine_exit(code, exit_code_for(*failure));
    if (residual_failure()) code = combine_exit(code, exit_residual);
    if (hypothesis_failure()) code = combine_exit(code, exit_input);
    return code;
  }

  json to_json(bool timing) const {
    json consts = json::array();
    for (const auto& k : constants) consts.push_back(constant_json(k));
    json chk = json::array();
    for (const auto& c : checks) chk.push_back(check_json(c));
    json out{{"name", name}, {"status", status}, {"residuals", residuals_json(residuals)},
             {"checks", chk}, {"constants", consts}};
    if (!note.empty()) out["note"] = note;
    if (failure) out["error"] = json{{"kind", error_kind_key(*failure)}, {"message", failure_message}};
    if (timing) out["seconds"] = seconds;
    return out;
  }
};

struct run_context {
  const run_config& cfg;
  const built_structure& built;
  const sample_plan& plan;
};

inline void run_validate(const run_context& ctx, suite_outcome& out) {
  const auto& st = ctx.built.st;
  out.residuals = validate_framed(st, ctx.plan, ctx.cfg.tol);
  append(out.residuals, validate_compatible(st, ctx.plan, ctx.cfg.tol));
  auto fm = fiber_manifold(ctx.built.fiber, point(st.m.lo().tail(2 * st.n)), point(st.m.hi().tail(2 * st.n)));
  auto fplan = sample_plan::make(fm, ctx.cfg.seed, ctx.cfg.points, ctx.cfg.h);
  append(out.residuals, validate_weak_kaehler(ctx.built.fiber, fm, fplan, ctx.cfg.tol, ctx.cfg.h));
  append(out.residuals, warping_checks(st, ctx.built.warping, ctx.plan, ctx.cfg.tol, ctx.cfg.h));
}

inline void run_identities(const run_context& ctx, suite_outcome& out) {
  const auto& st = ctx.built.st;
  const auto& tol = ctx.cfg.tol;
  real h = ctx.cfg.h;
  out.residuals = normality_suite(st, ctx.plan, tol, h);
  append(out.residuals, kenmotsu_suite(st, ctx.plan, tol, h));
  append(out.residuals, kenmotsu_characterization_suite(st, ctx.plan, tol, h));
  append(out.residuals, umbilicity_check(st, ctx.plan, tol, h));
}

inline void run_curvature(const run_context& ctx, suite_outcome& out) {
  const auto& st = ctx.built.st;
  require_constant_beta(st, "the curvature suite");
  out.residuals = curvature_suite(st, ctx.plan, ctx.cfg.tol, ctx.cfg.h);
  out.checks.push_back(eta_einstein_check(st, ctx.plan, ctx.cfg.tol, ctx.cfg.h));
  out.checks.push_back(xi_parallel_ricci_verify(st, ctx.plan, ctx.cfg.tol, ctx.cfg.h));
}

inline void run_soliton(const run_context& ctx, suite_outcome& out) {
  if (!ctx.cfg.soliton) {
    out.status = "skipped";
    out.note = "no soliton block in config";
    return;
  }
  const auto& st = ctx.built.st;
  auto spec = build_soliton_spec(ctx.cfg, st);
  out.note = "V = " + spec.description;
  auto res = soliton_suite(st, spec, ctx.plan, ctx.cfg.tol, ctx.cfg.h);
  out.residuals = res.residuals;
  out.constants = res.constants;
  out.checks = res.checks;
}

/// Runs one suite, turning thrown errors into a recorded outcome.
inline suite_outcome run_suite(const std::string& name, const run_context& ctx) {
  suite_outcome out;
  out.name = name;
  auto start = std::chrono::steady_clock::now();
  try {
    if (name == "validate") run_validate(ctx, out);
    else if (name == "identities") run_identities(ctx, out);
    else if (name == "curvature") run_curvature(ctx, out);
    else if (name == "soliton") run_soliton(ctx, out);
    else throw error(error_kind::config, "unknown suite \"" + name + "\"");
    if (out.status != "skipped") out.status = out.exit_contribution() == exit_pass ? "pass" : "fail";
  } catch (const error& e) {
    out.residuals.clear();
    out.checks.clear();
    out.constants.clear();
    if (e.kind() == error_kind::gated) {
      out.status = "gated";
      out.note = e.what();
    } else {
      out.status = "error";
      out.failure = e.kind();
      out.failure_message = e.what();
    }
  } catch (const std::exception& e) {
    out.residuals.clear();
    out.checks.clear();
    out.constants.clear();
    out.status = "error";
    out.failure = error_kind::internal;
    out.failure_message = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// --- verify -----------------------------------------------------------------------

struct run_overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<real> h;
  std::vector<std::string> suites;
  bool timing = false;
};

inline void apply_overrides(run_config& c, const run_overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.points) {
    if (*o.points < 1) throw error(error_kind::config, "--points must be positive");
    c.points = *o.points;
  }
  if (o.h) {
    if (!(*o.h > 0)) throw error(error_kind::config, "--h must be positive");
    c.h = *o.h;
  }
  if (!o.suites.empty()) c.suites = o.suites;
  c.suites = ordered_suites(c.suites);
}

struct verify_result {
  json report;
  int exit_code = exit_pass;
};

inline json convention_notes() {
  return json{
      {"qtilde", "Q~ = Q - id; vanishes when Q = id"},
      {"curvature", "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z"},
      {"ricci", "Ric(Y,Z) = trace(X -> R(X,Y)Z)"},
      {"soliton", "1/2 L_V g + Ric = lambda g + mu sum eta^i eta^i + (lambda+mu) sum_{i!=j} eta^i eta^j"},
      {"lambda_mu", "fitted as global constants by least squares unless given"}};
}

inline json structure_json(const run_config& c, const built_structure& b) {
  return json{{"n", c.n},
              {"s", c.s},
              {"dim", b.st.dim()},
              {"fiber", c.flat_fiber ? "flat" : "user"},
              {"sigma", b.warping.sigma.print()},
              {"warping", to_string(b.warping.kind)},
              {"beta_constant", b.st.beta_constant}};
}

/// Report skeleton shared by successful and failed runs.
inline json report_header(const run_config& c) {
  json suites = json::array();
  for (const auto& s : c.suites) suites.push_back(s);
  return json{{"format_version", report_format_version},
              {"tool", "kenlab"},
              {"conventions", convention_notes()},
              {"config", c.source},
              {"effective", json{{"seed", c.seed},
                                 {"points", c.points},
                                 {"h", static_cast<double>(c.h)},
                                 {"domain", json::array({static_cast<double>(c.lo), static_cast<double>(c.hi)})},
                                 {"suites", suites},
                                 {"tolerances", tolerances_json(c.tol)}}}};
}

inline verify_result run_verify(run_config c, const run_overrides& o = {}) {
  apply_overrides(c, o);
  verify_result out;
  json& rep = out.report;
  rep = report_header(c);
  std::optional<built_structure> built;
  std::optional<sample_plan> plan;
  try {
    built = build_structure(c);
    plan = sample_plan::make(built->st.m, c.seed, c.points, c.h);
  } catch (const error& e) {
    out.exit_code = exit_code_for(e.kind());
    rep["error"] = json{{"kind", error_kind_key(e.kind())}, {"message", e.what()}};
    rep["suites"] = json::array();
    rep["constants"] = json::array();
    rep["pass"] = false;
    rep["exit_code"] = out.exit_code;
    return out;
  }
  rep["structure"] = structure_json(c, *built);
  run_context ctx{c, *built, *plan};
  json suites = json::array(), constants = json::array();
  bool blocked = false;
  int code = exit_pass;
  for (const auto& name : c.suites) {
    suite_outcome so;
    if (blocked) {
      so.name = name;
      so.status = "skipped";
      so.note = "validate failed";
    } else {
      so = run_suite(name, ctx);
    }
    // hypothesis residuals in validate are reported but do not block later suites
    if (name == "validate" && (so.residual_failure() || so.failure)) blocked = true;
    code = combine_exit(code, so.exit_contribution());
    for (const auto& k : so.constants) {
      json j = constant_json(k);
      j["source"] = name;
      constants.push_back(j);
    }
    for (const auto& ch : so.checks)
      for (const auto& k : ch.constants) {
        json j = constant_json(k);
        j["source"] = ch.name;
        constants.push_back(j);
      }
    suites.push_back(so.to_json(o.timing));
  }
  rep["suites"] = suites;
  rep["constants"] = constants;
  rep["pass"] = code == exit_pass;
  rep["exit_code"] = code;
  out.exit_code = code;
  return out;
}

// --- convergence ------------------------------------------------------------------

/// Residuals with closed-form references, evaluated on one fixed point set per step.
inline const std::vector<std::string>& convergence_identities() {
  static const std::vector<std::string> ids{"kenmotsu.defect", "curvature.r_xi", "curvature.ricci_xi"};
  return ids;
}

inline constexpr real roundoff_step = 1e-6L;

struct convergence_result {
  json table;
  int exit_code = exit_pass;
};

inline convergence_result run_convergence(run_config c, std::vector<real> steps, const run_overrides& o = {}) {
  if (steps.size() < 2) throw error(error_kind::precondition, "convergence needs at least two step sizes");
  for (real h : steps)
    if (!(h > 0)) throw error(error_kind::config, "step sizes must be positive");
  apply_overrides(c, o);
  auto built = build_structure(c);
  const auto& st = built.st;
  real hmax = *std::max_element(steps.begin(), steps.end());
  // the same points for every step; the clearance of the largest step covers the rest
  auto plan = sample_plan::make(st.m, c.seed, c.points, hmax);

  json warnings = json::array();
  for (real h : steps)
    if (h < roundoff_step) {
      std::ostringstream os;
      os.precision(6);
      os << "step " << static_cast<double>(h) << " is below " << static_cast<double>(roundoff_step)
         << "; residuals are likely roundoff dominated";
      warnings.push_back(os.str());
    }

  std::vector<std::vector<std::optional<real>>> values(convergence_identities().size());
  for (real h : steps) {
    residual_list got = kenmotsu_suite(st, plan, c.tol, h);
    if (st.beta_constant) {
      append(got, check_curvature_xi(st, plan, c.tol, h));
      append(got, check_ricci_xi(st, plan, c.tol, h));
    }
    for (std::size_t k = 0; k < convergence_identities().size(); ++k) {
      auto r = find(got, convergence_identities()[k]);
      values[k].push_back(r ? std::optional<real>(r->max_abs) : std::nullopt);
    }
  }

  json rows = json::array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    json res = json::array(), ratios = json::array();
    for (std::size_t t = 0; t < steps.size(); ++t) {
      res.push_back(values[k][t] ? number_json(*values[k][t]) : json(nullptr));
      if (t == 0) continue;
      const auto &a = values[k][t - 1], &b = values[k][t];
      ratios.push_back(a && b && *b > 0 ? number_json(*a / *b) : json(nullptr));
    }
    json row{{"name", convergence_identities()[k]}, {"residuals", res}, {"ratios", ratios}};
    if (!values[k].front()) row["note"] = "gated: beta is not constant";
    rows.push_back(row);
  }
  json hs = json::array();
  for (real h : steps) hs.push_back(static_cast<double>(h));
  convergence_result out;
  out.table = json{{"format_version", report_format_version},
                   {"tool", "kenlab"},
                   {"config", c.source},
                   {"seed", c.seed},
                   {"points", c.points},
                   {"steps", hs},
                   {"rows", rows},
                   {"warnings", warnings}};
  return out;
}

}  // namespace kenlab
