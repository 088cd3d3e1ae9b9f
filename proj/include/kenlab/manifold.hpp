#pragma once

#include "kenlab/tensor.hpp"
#include "kenlab/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace kenlab {

// Fields are pure callbacks over chart coordinates.
using scalar_field = std::function<real(const point&)>;
using vector_field = std::function<vec(const point&)>;
using covector_field = std::function<vec(const point&)>;  // components omega_a
using tensor11_field = std::function<mat(const point&)>;  // S^a_b, acting as S * X
using form2_field = std::function<mat(const point&)>;     // Phi_ab
using metric_field = std::function<mat(const point&)>;

class charted_manifold {
 public:
  charted_manifold(int dim, std::vector<std::string> coords, metric_field metric, vec lo, vec hi)
      : dim_(dim), coords_(std::move(coords)), metric_(std::move(metric)), lo_(std::move(lo)),
        hi_(std::move(hi)) {
    if (dim_ < 1 || dim_ > max_dim)
      throw error(error_kind::config, "chart dimension " + std::to_string(dim_) +
                                          " outside [1, " + std::to_string(max_dim) + "]");
    if (static_cast<int>(coords_.size()) != dim_ || lo_.size() != dim_ || hi_.size() != dim_)
      throw error(error_kind::config, "coordinate list and domain box must match the dimension");
    for (int a = 0; a < dim_; ++a)
      if (!(lo_[a] < hi_[a]))
        throw error(error_kind::config, "empty domain interval for " + coords_[a]);
  }

  /// Default box [-0.5, 0.5]^dim.
  charted_manifold(int dim, std::vector<std::string> coords, metric_field metric)
      : charted_manifold(dim, std::move(coords), std::move(metric), vec::Constant(dim, -0.5L),
                         vec::Constant(dim, 0.5L)) {}

  int dim() const { return dim_; }
  const std::vector<std::string>& coords() const { return coords_; }
  const vec& lo() const { return lo_; }
  const vec& hi() const { return hi_; }

  void require_inside(const point& q) const {
    for (int a = 0; a < dim_; ++a) {
      if (q[a] < lo_[a] || q[a] > hi_[a])
        throw error(error_kind::boundary,
                    "stencil node " + format_point(q) + " leaves the domain box along " + coords_[a]);
    }
  }

  /// Metric at a stencil node; checks the box and positive definiteness.
  mat metric_at(const point& q) const {
    require_inside(q);
    mat g = metric_(q);
    if (g.rows() != dim_ || g.cols() != dim_)
      throw error(error_kind::internal, "metric callback returned wrong shape");
    Eigen::LLT<mat> llt(g);
    if (llt.info() != Eigen::Success || !g.allFinite())
      throw error(error_kind::degenerate_metric, "metric not positive definite at " + format_point(q));
    return g;
  }

  const metric_field& metric() const { return metric_; }

 private:
  int dim_;
  std::vector<std::string> coords_;
  metric_field metric_;
  vec lo_, hi_;
};

/// Seeded uniform draws. The integer-to-real mapping is written out so the
/// stream does not depend on the standard library's distributions.
class seeded_stream {
 public:
  explicit seeded_stream(std::uint64_t seed) : rng_(seed) {}
  real uniform(real a, real b) {
    real u = static_cast<real>(rng_() >> 11) * 0x1.0p-53L;
    return a + (b - a) * u;
  }

 private:
  std::mt19937_64 rng_;
};

/// Polynomial vector field of degree <= 2 in the chart coordinates.
struct polynomial_field {
  int dim = 0;
  std::vector<real> coeff;  // per component: constant, linear (dim), quadratic (i <= j)

  static int terms(int dim) { return 1 + dim + dim * (dim + 1) / 2; }

  vec operator()(const point& p) const {
    vec out(dim);
    int t = terms(dim);
    for (int a = 0; a < dim; ++a) {
      const real* c = coeff.data() + static_cast<std::size_t>(a) * t;
      real v = c[0];
      int k = 1;
      for (int i = 0; i < dim; ++i) v += c[k++] * p[i];
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) v += c[k++] * p[i] * p[j];
      out[a] = v;
    }
    return out;
  }
};

/// Sample points and probe fields. Points keep a clearance from the box
/// boundary so that nested stencils stay inside.
struct sample_plan {
  std::uint64_t seed = 42;
  int count = 50;
  real clearance = 0;
  std::vector<point> points;
  std::array<polynomial_field, 3> probes;

  static constexpr real clearance_steps = 8;

  static sample_plan make(const charted_manifold& m, std::uint64_t seed, int count, real h) {
    if (count < 1) throw error(error_kind::config, "sample count must be positive");
    if (!(h > 0)) throw error(error_kind::config, "step h must be positive");
    sample_plan plan;
    plan.seed = seed;
    plan.count = count;
    plan.clearance = clearance_steps * h;
    int n = m.dim();
    for (int a = 0; a < n; ++a)
      if (m.hi()[a] - m.lo()[a] <= 2 * plan.clearance)
        throw error(error_kind::config, "domain box too small for step h along " + m.coords()[a]);
    seeded_stream rng(seed);
    for (int k = 0; k < count; ++k) {
      point p(n);
      for (int a = 0; a < n; ++a)
        p[a] = rng.uniform(m.lo()[a] + plan.clearance, m.hi()[a] - plan.clearance);
      plan.points.push_back(p);
    }
    for (auto& probe : plan.probes) {
      probe.dim = n;
      probe.coeff.resize(static_cast<std::size_t>(n) * polynomial_field::terms(n));
      for (auto& c : probe.coeff) c = rng.uniform(-1, 1);
    }
    return plan;
  }

  vector_field probe(int k) const { return probes[k]; }
};

inline vector_field constant_field(const vec& v) {
  return [v](const point&) { return v; };
}

inline vector_field coordinate_field(int dim, int a) { return constant_field(basis(dim, a)); }

}  // namespace kenlab
