#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace kenlab {

/// Largest chart dimension the engine accepts.
inline constexpr int max_dim = 12;

/// Working precision of every stencil and tensor contraction.
///
/// Fourth-order second-derivative stencils at h = 1e-3 lose about
/// eps / h^2 to cancellation; with a 64-bit mantissa that floor sits well
/// below the h^4 truncation term, so halving h shows the full order.
using real = long double;

using vec = Eigen::Matrix<real, Eigen::Dynamic, 1, 0, max_dim, 1>;
using mat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic, 0, max_dim, max_dim>;
using point = vec;

enum class error_kind {
  config,           // malformed input, schema violations, bad parameters
  domain,           // expression domain fault (log of nonpositive, ...)
  boundary,         // stencil leaves the chart's domain box
  degenerate_metric,
  gated,            // identity requested outside its hypotheses (beta not constant)
  precondition,     // theorem precondition violated (delta vanishes, ...)
  underdetermined,  // least-squares fit with rank-deficient design
  internal,
};

inline const char* to_string(error_kind k) {
  switch (k) {
    case error_kind::config: return "configuration error";
    case error_kind::domain: return "domain fault";
    case error_kind::boundary: return "boundary clearance";
    case error_kind::degenerate_metric: return "metric degenerate";
    case error_kind::gated: return "gated identity";
    case error_kind::precondition: return "precondition violation";
    case error_kind::underdetermined: return "underdetermined fit";
    case error_kind::internal: return "internal error";
  }
  return "error";
}

class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

inline std::string format_point(const point& p) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << static_cast<double>(p[i]);
  }
  os << ')';
  return os.str();
}

/// Unit basis vector e_a in dimension n.
inline vec basis(int n, int a) {
  vec e = vec::Zero(n);
  e[a] = 1;
  return e;
}

/// Max absolute coordinate component; the residual norm used everywhere.
template <class Derived>
real max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? real(0) : m.cwiseAbs().maxCoeff();
}

inline real max_abs(real x) { return x < 0 ? -x : x; }

}  // namespace kenlab
