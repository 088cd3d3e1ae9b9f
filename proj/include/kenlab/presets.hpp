#pragma once

// Shipped presets, one per theorem family. configs/<name>.json holds the same
// documents; a test keeps the two in sync.

#include "kenlab/config.hpp"

#include <string>
#include <vector>

namespace kenlab {

struct preset {
  std::string name;
  std::string text;
};

inline const std::vector<preset>& presets() {
  static const std::vector<preset> all{
      {"classical", R"json({
  "format_version": 1,
  "name": "classical",
  "description": "classical Kenmotsu: s = 1, n = 1, Q = id, warped over a flat fiber",
  "n": 1,
  "s": 1,
  "fiber": {"flat": {"lambdas": [1]}},
  "sigma": "exp(t_1)",
  "beta": 1,
  "sampling": {"seed": 42, "points": 50, "h": 0.001}
})json"},
      {"weak_warped", R"json({
  "format_version": 1,
  "name": "weak_warped",
  "description": "weak beta-Kenmotsu f-manifold: n = 2, s = 2, J with lambdas (2, 1)",
  "n": 2,
  "s": 2,
  "fiber": {"flat": {"lambdas": [2, 1]}},
  "sigma": "exp(t_1+t_2)",
  "beta": 1,
  "sampling": {"seed": 42, "points": 50, "h": 0.001}
})json"},
      {"twisted", R"json({
  "format_version": 1,
  "name": "twisted",
  "description": "twisted product: sigma depends on the fiber, beta is not constant",
  "n": 1,
  "s": 2,
  "fiber": {"flat": {"lambdas": [1]}},
  "sigma": "exp((1+0.1*x_1^2)*(t_1+t_2))",
  "beta": "1+0.1*x_1^2",
  "sampling": {"seed": 42, "points": 50, "h": 0.001}
})json"},
      {"soliton", R"json({
  "format_version": 1,
  "name": "soliton",
  "description": "n = 1, s = 2, beta = 1 with the collinear potential V = 3 xibar",
  "n": 1,
  "s": 2,
  "fiber": {"flat": {"lambdas": [1]}},
  "sigma": "exp(t_1+t_2)",
  "beta": 1,
  "soliton": {"potential": {"delta": 3}, "lambda": "fit", "mu": "fit"},
  "sampling": {"seed": 42, "points": 50, "h": 0.001}
})json"},
  };
  return all;
}

inline const preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

inline run_config preset_config(const std::string& name) {
  auto p = find_preset(name);
  if (!p) throw error(error_kind::config, "unknown preset \"" + name + "\"");
  return parse_config_text(p->text);
}

}  // namespace kenlab
