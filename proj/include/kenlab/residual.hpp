#pragma once

#include "kenlab/types.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace kenlab {

struct tolerances {
  real id = 1e-8L;  // algebraic, no differencing
  real d1 = 1e-6L;  // one derivative
  real d2 = 1e-4L;  // two derivatives
  real d3 = 5e-3L;  // three derivatives
};

enum class comparison { below, above };

/// What a failing residual means for the exit code.
enum class residual_category {
  identity,    // the geometric claim itself
  engine,      // internal consistency between two numerical routes
  hypothesis,  // input does not meet the premise (beta vanishing, inconsistent warping)
};

inline const char* to_string(residual_category c) {
  switch (c) {
    case residual_category::identity: return "identity";
    case residual_category::engine: return "engine";
    case residual_category::hypothesis: return "hypothesis";
  }
  return "identity";
}

struct residual_field {
  std::string name;
  std::string description;
  real max_abs = 0;  // for comparison::above this holds the minimum
  point argmax;
  real tolerance = 0;
  comparison cmp = comparison::below;
  residual_category category = residual_category::identity;
  bool pass = true;
  int evaluations = 0;
};

/// Running max of |value| over sample points (or min for lower bounds).
class residual_accumulator {
 public:
  residual_accumulator(std::string name, std::string description, real tolerance,
                       comparison cmp = comparison::below,
                       residual_category category = residual_category::identity) {
    r_.name = std::move(name);
    r_.description = std::move(description);
    r_.tolerance = tolerance;
    r_.cmp = cmp;
    r_.category = category;
    r_.max_abs = cmp == comparison::below ? real(0) : std::numeric_limits<real>::infinity();
  }

  void add(real value, const point& p) {
    // non-finite values count as the worst possible outcome
    bool below = r_.cmp == comparison::below;
    real v = std::isfinite(value) ? std::fabs(value)
                                  : (below ? std::numeric_limits<real>::infinity() : real(0));
    if (r_.evaluations == 0 || (below ? v > r_.max_abs : v < r_.max_abs)) {
      r_.max_abs = v;
      r_.argmax = p;
    }
    ++r_.evaluations;
  }

  template <class Derived>
  void add(const Eigen::MatrixBase<Derived>& m, const point& p) {
    add(kenlab::max_abs(m), p);
  }

  residual_field finish() const {
    residual_field r = r_;
    r.pass = r.cmp == comparison::below ? r.max_abs < r.tolerance : r.max_abs > r.tolerance;
    return r;
  }

 private:
  residual_field r_;
};

using residual_list = std::vector<residual_field>;

inline bool all_pass(const residual_list& list) {
  for (const auto& r : list)
    if (!r.pass) return false;
  return true;
}

inline const residual_field* find(const residual_list& list, const std::string& name) {
  for (const auto& r : list)
    if (r.name == name) return &r;
  return nullptr;
}

inline void append(residual_list& to, const residual_list& from) {
  to.insert(to.end(), from.begin(), from.end());
}

/// A fitted or measured constant next to its closed-form prediction.
struct fitted_constant {
  std::string name;
  real value = 0;
  std::optional<real> predicted;
  real tolerance = 0;
  bool pass = true;
};

inline fitted_constant make_constant(std::string name, real value, std::optional<real> predicted,
                                     real tolerance) {
  fitted_constant c{std::move(name), value, predicted, tolerance, true};
  if (predicted) c.pass = std::isfinite(value) && std::fabs(value - *predicted) < tolerance;
  return c;
}

/// A theorem-style check: hypotheses are measured first; when they fail the
/// conclusions are not asserted and the fragment is reported as not applicable.
struct theorem_check {
  std::string name;
  bool applicable = true;
  std::string note;
  residual_list hypotheses;
  residual_list conclusions;
  std::vector<fitted_constant> constants;

  bool pass() const {
    if (!applicable) return true;
    for (const auto& c : constants)
      if (!c.pass) return false;
    return all_pass(conclusions);
  }
};

inline const fitted_constant* find_constant(const std::vector<fitted_constant>& list,
                                            const std::string& name) {
  for (const auto& c : list)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace kenlab
