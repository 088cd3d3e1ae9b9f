#pragma once

// Run configuration: JSON with a format_version field, validated before any numerics.
// Every error names the offending field path.

#include "kenlab/residual.hpp"
#include "kenlab/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kenlab {

using json = nlohmann::json;

inline constexpr int config_format_version = 1;

inline const std::vector<std::string>& suite_order() {
  static const std::vector<std::string> order{"validate", "identities", "curvature", "soliton"};
  return order;
}

struct soliton_config {
  std::optional<std::string> delta;      // V = delta * xibar
  std::vector<std::string> components;   // or V by components
  std::optional<real> lambda, mu;        // absent means fit
};

struct fault_config {
  std::optional<real> q_xi;         // Q xi_1 = (1 + eps) xi_1
  std::optional<real> fiber_scale;  // metric scaled along the first fiber direction
};

struct run_config {
  std::string name;
  std::string description;
  int n = 0, s = 0;
  bool flat_fiber = true;
  std::vector<real> lambdas;
  std::vector<std::vector<std::string>> fiber_metric, fiber_j;  // user fibers, over x_1..x_2n
  std::string sigma;
  std::optional<std::string> beta;
  bool check_warping = true;
  std::optional<soliton_config> soliton;
  std::uint64_t seed = 42;
  int points = 50;
  real h = 1e-3L;
  real lo = -0.5L, hi = 0.5L;
  tolerances tol;
  std::vector<std::string> suites = suite_order();
  fault_config faults;
  json source;  // the document as read, echoed in reports
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path, const std::string& what) {
  throw error(error_kind::config, "config field \"" + path + "\": " + what);
}

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) config_fail(join_path(path, it.key()), "unknown field");
}

inline const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
  return j;
}

inline int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_fail(path, "expected an integer");
  return j.get<int>();
}

inline real get_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return static_cast<real>(j.get<double>());
}

inline real get_positive(const json& j, const std::string& path) {
  real v = get_number(j, path);
  if (!(v > 0)) config_fail(path, "must be positive");
  return v;
}

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

/// An expression field: either an expression string or a number.
inline std::string get_expression(const json& j, const std::string& path) {
  if (j.is_string()) {
    auto t = j.get<std::string>();
    if (t.empty()) config_fail(path, "empty expression");
    return t;
  }
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  config_fail(path, "expected an expression string or a number");
}

inline std::vector<std::vector<std::string>> get_expr_matrix(const json& j, const std::string& path, int size) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    config_fail(path, "expected " + std::to_string(size) + " rows");
  std::vector<std::vector<std::string>> out;
  for (int r = 0; r < size; ++r) {
    std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != size)
      config_fail(rp, "expected " + std::to_string(size) + " entries");
    std::vector<std::string> row;
    for (int c = 0; c < size; ++c) row.push_back(get_expression(j[r][c], rp + "[" + std::to_string(c) + "]"));
    out.push_back(std::move(row));
  }
  return out;
}

inline std::optional<real> get_lambda_like(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "fit") return std::nullopt;
    config_fail(path, "expected a number or \"fit\"");
  }
  return get_number(j, path);
}

}  // namespace detail

inline run_config parse_config(const json& doc) {
  using namespace detail;
  require_object(doc, "(root)");
  reject_unknown(doc, "", {"format_version", "name", "description", "n", "s", "fiber", "sigma", "beta",
                           "check_warping", "soliton", "sampling", "domain", "tolerances", "suites",
                           "faults"});
  run_config c;
  c.source = doc;
  if (!doc.contains("format_version")) config_fail("format_version", "missing");
  int version = get_int(doc["format_version"], "format_version");
  if (version != config_format_version)
    config_fail("format_version", "unsupported version " + std::to_string(version) + " (expected " +
                                      std::to_string(config_format_version) + ")");
  if (doc.contains("name")) c.name = get_string(doc["name"], "name");
  if (doc.contains("description")) c.description = get_string(doc["description"], "description");
  for (const char* key : {"n", "s", "sigma"})
    if (!doc.contains(key)) config_fail(key, "missing");
  c.n = get_int(doc["n"], "n");
  if (c.n < 1) config_fail("n", "must be at least 1");
  c.s = get_int(doc["s"], "s");
  if (c.s < 1) config_fail("s", "must be at least 1");
  if (2 * c.n + c.s > max_dim)
    config_fail("n", "dimension 2n+s = " + std::to_string(2 * c.n + c.s) + " exceeds " + std::to_string(max_dim));
  c.sigma = get_expression(doc["sigma"], "sigma");
  if (doc.contains("beta")) c.beta = get_expression(doc["beta"], "beta");
  if (doc.contains("check_warping")) {
    if (!doc["check_warping"].is_boolean()) config_fail("check_warping", "expected true or false");
    c.check_warping = doc["check_warping"].get<bool>();
  }

  if (!doc.contains("fiber")) config_fail("fiber", "missing");
  const json& fb = require_object(doc["fiber"], "fiber");
  if (fb.size() != 1 || !(fb.contains("flat") || fb.contains("user")))
    config_fail("fiber", "expected exactly one of \"flat\" or \"user\"");
  if (fb.contains("flat")) {
    const json& fl = require_object(fb["flat"], "fiber.flat");
    reject_unknown(fl, "fiber.flat", {"lambdas"});
    if (!fl.contains("lambdas") || !fl["lambdas"].is_array())
      config_fail("fiber.flat.lambdas", "expected an array of n positive numbers");
    if (static_cast<int>(fl["lambdas"].size()) != c.n)
      config_fail("fiber.flat.lambdas", "expected " + std::to_string(c.n) + " entries");
    for (std::size_t k = 0; k < fl["lambdas"].size(); ++k)
      c.lambdas.push_back(get_positive(fl["lambdas"][k], "fiber.flat.lambdas[" + std::to_string(k) + "]"));
  } else {
    const json& us = require_object(fb["user"], "fiber.user");
    reject_unknown(us, "fiber.user", {"metric", "j"});
    c.flat_fiber = false;
    if (!us.contains("metric")) config_fail("fiber.user.metric", "missing");
    if (!us.contains("j")) config_fail("fiber.user.j", "missing");
    c.fiber_metric = get_expr_matrix(us["metric"], "fiber.user.metric", 2 * c.n);
    c.fiber_j = get_expr_matrix(us["j"], "fiber.user.j", 2 * c.n);
  }

  if (doc.contains("soliton")) {
    const json& so = require_object(doc["soliton"], "soliton");
    reject_unknown(so, "soliton", {"potential", "lambda", "mu"});
    soliton_config sc;
    if (!so.contains("potential")) config_fail("soliton.potential", "missing");
    const json& pot = require_object(so["potential"], "soliton.potential");
    reject_unknown(pot, "soliton.potential", {"delta", "components"});
    if (pot.size() != 1) config_fail("soliton.potential", "expected exactly one of \"delta\" or \"components\"");
    if (pot.contains("delta")) {
      sc.delta = get_expression(pot["delta"], "soliton.potential.delta");
    } else {
      const json& comp = pot["components"];
      int dim = 2 * c.n + c.s;
      if (!comp.is_array() || static_cast<int>(comp.size()) != dim)
        config_fail("soliton.potential.components", "expected " + std::to_string(dim) + " expressions");
      for (int a = 0; a < dim; ++a)
        sc.components.push_back(get_expression(comp[a], "soliton.potential.components[" + std::to_string(a) + "]"));
    }
    sc.lambda = so.contains("lambda") ? get_lambda_like(so["lambda"], "soliton.lambda") : std::nullopt;
    sc.mu = so.contains("mu") ? get_lambda_like(so["mu"], "soliton.mu") : std::nullopt;
    if (sc.lambda.has_value() != sc.mu.has_value())
      config_fail("soliton.mu", "lambda and mu must both be numbers or both be \"fit\"");
    c.soliton = sc;
  }

  if (doc.contains("sampling")) {
    const json& sa = require_object(doc["sampling"], "sampling");
    reject_unknown(sa, "sampling", {"seed", "points", "h"});
    if (sa.contains("seed")) {
      if (!sa["seed"].is_number_unsigned()) config_fail("sampling.seed", "expected a non-negative integer");
      c.seed = sa["seed"].get<std::uint64_t>();
    }
    if (sa.contains("points")) {
      c.points = get_int(sa["points"], "sampling.points");
      if (c.points < 1) config_fail("sampling.points", "must be positive");
    }
    if (sa.contains("h")) c.h = get_positive(sa["h"], "sampling.h");
  }
  if (doc.contains("domain")) {
    const json& dm = require_object(doc["domain"], "domain");
    reject_unknown(dm, "domain", {"lo", "hi"});
    if (dm.contains("lo")) c.lo = get_number(dm["lo"], "domain.lo");
    if (dm.contains("hi")) c.hi = get_number(dm["hi"], "domain.hi");
    if (!(c.hi > c.lo)) config_fail("domain.hi", "must exceed domain.lo");
  }
  if (doc.contains("tolerances")) {
    const json& to = require_object(doc["tolerances"], "tolerances");
    reject_unknown(to, "tolerances", {"id", "d1", "d2", "d3"});
    if (to.contains("id")) c.tol.id = get_positive(to["id"], "tolerances.id");
    if (to.contains("d1")) c.tol.d1 = get_positive(to["d1"], "tolerances.d1");
    if (to.contains("d2")) c.tol.d2 = get_positive(to["d2"], "tolerances.d2");
    if (to.contains("d3")) c.tol.d3 = get_positive(to["d3"], "tolerances.d3");
  }
  if (doc.contains("suites")) {
    const json& su = doc["suites"];
    if (!su.is_array() || su.empty()) config_fail("suites", "expected a non-empty array");
    c.suites.clear();
    for (std::size_t k = 0; k < su.size(); ++k) {
      std::string path = "suites[" + std::to_string(k) + "]";
      auto name = get_string(su[k], path);
      bool known = false;
      for (const auto& s : suite_order()) known = known || s == name;
      if (!known) config_fail(path, "unknown suite \"" + name + "\"");
      c.suites.push_back(name);
    }
  }
  if (doc.contains("faults")) {
    const json& fa = require_object(doc["faults"], "faults");
    reject_unknown(fa, "faults", {"q_xi", "fiber_scale"});
    if (fa.contains("q_xi")) c.faults.q_xi = get_number(fa["q_xi"], "faults.q_xi");
    if (fa.contains("fiber_scale")) c.faults.fiber_scale = get_positive(fa["fiber_scale"], "faults.fiber_scale");
  }
  return c;
}

inline run_config parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(error_kind::config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline run_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(error_kind::config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Normalizes a suite selection to the fixed execution order.
inline std::vector<std::string> ordered_suites(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& s : suite_order())
    for (const auto& r : requested)
      if (r == s) {
        out.push_back(s);
        break;
      }
  for (const auto& r : requested) {
    bool known = false;
    for (const auto& s : suite_order()) known = known || s == r;
    if (!known) throw error(error_kind::config, "unknown suite \"" + r + "\"");
  }
  return out;
}

}  // namespace kenlab
