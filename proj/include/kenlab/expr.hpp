#pragma once

// Scalar expression language over chart coordinates.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | coord | func '(' expr ')' | '(' expr ')'
//
// With this layout -2^2 is -(2^2) and 2^-1 is allowed.

#include "kenlab/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kenlab {

class expr_error : public error {
 public:
  expr_error(error_kind kind, std::size_t offset, const std::string& msg,
             std::vector<std::string> expected = {}, std::string name = {})
      : error(kind, msg + " at offset " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)),
        name_(std::move(name)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string name_;
};

enum class expr_op { num, var, neg, add, sub, mul, div, pow, exp, log, sin, cos, sqrt };

struct expr_node {
  expr_op op;
  double value = 0;  // num
  int var = -1;      // var: index into the coordinate list
  std::size_t offset = 0;
  std::shared_ptr<const expr_node> a, b;
};

using expr_node_ptr = std::shared_ptr<const expr_node>;

namespace detail {

inline bool is_binary(expr_op op) {
  return op == expr_op::add || op == expr_op::sub || op == expr_op::mul || op == expr_op::div ||
         op == expr_op::pow;
}

inline bool is_function(expr_op op) {
  return op == expr_op::exp || op == expr_op::log || op == expr_op::sin || op == expr_op::cos ||
         op == expr_op::sqrt;
}

inline const char* op_text(expr_op op) {
  switch (op) {
    case expr_op::add: return "+";
    case expr_op::sub: return "-";
    case expr_op::mul: return "*";
    case expr_op::div: return "/";
    case expr_op::pow: return "^";
    case expr_op::exp: return "exp";
    case expr_op::log: return "log";
    case expr_op::sin: return "sin";
    case expr_op::cos: return "cos";
    case expr_op::sqrt: return "sqrt";
    default: return "";
  }
}

inline std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Folding happens only when the double result carries no rounding.
inline bool exact_binary(expr_op op, double x, double y, double& out) {
  switch (op) {
    case expr_op::add:
    case expr_op::sub: {
      double yy = op == expr_op::add ? y : -y;
      double s = x + yy;
      if (!std::isfinite(s)) return false;
      double bb = s - x;
      double err = (x - (s - bb)) + (yy - bb);  // two-sum error term
      if (err != 0) return false;
      out = s;
      return true;
    }
    case expr_op::mul: {
      double p = x * y;
      if (!std::isfinite(p) || std::fma(x, y, -p) != 0) return false;
      if (p == 0 && x != 0 && y != 0) return false;  // underflow
      out = p;
      return true;
    }
    case expr_op::div: {
      if (y == 0) return false;
      double q = x / y;
      if (!std::isfinite(q) || std::fma(q, y, -x) != 0) return false;
      if (q == 0 && x != 0) return false;
      out = q;
      return true;
    }
    case expr_op::pow: {
      // integer exponents only, via exact repeated multiplication
      if (y < 0 || y > 1024 || y != std::floor(y)) return false;
      double acc = 1;
      for (int k = 0; k < static_cast<int>(y); ++k)
        if (!exact_binary(expr_op::mul, acc, x, acc)) return false;
      out = acc;
      return true;
    }
    default: return false;
  }
}

class parser {
 public:
  parser(std::string_view text, const std::vector<std::string>& coords)
      : s_(text), coords_(coords) {}

  expr_node_ptr run() {
    skip();
    if (pos_ >= s_.size()) fail({"number", "identifier", "(", "-"});
    auto e = sum();
    skip();
    if (pos_ < s_.size()) fail({"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

 private:
  std::string_view s_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found = pos_ < s_.size() ? "'" + std::string(1, s_[pos_]) + "'" : "end of input";
    std::string msg = "syntax error: expected one of {";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    msg += "}, found " + found;
    throw expr_error(error_kind::config, pos_, msg, std::move(expected));
  }

  static expr_node_ptr make(expr_op op, std::size_t off, expr_node_ptr a, expr_node_ptr b = nullptr) {
    auto n = std::make_shared<expr_node>();
    n->op = op;
    n->offset = off;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  static expr_node_ptr number(double v, std::size_t off) {
    auto n = std::make_shared<expr_node>();
    n->op = expr_op::num;
    n->value = v;
    n->offset = off;
    return n;
  }

  static expr_node_ptr fold(expr_op op, std::size_t off, expr_node_ptr a, expr_node_ptr b) {
    double v;
    if (a->op == expr_op::num && b->op == expr_op::num && exact_binary(op, a->value, b->value, v))
      return number(v, a->offset);
    return make(op, off, std::move(a), std::move(b));
  }

  expr_node_ptr sum() {
    auto lhs = product();
    for (;;) {
      skip();
      std::size_t off = pos_;
      if (eat('+')) lhs = fold(expr_op::add, off, lhs, product());
      else if (eat('-')) lhs = fold(expr_op::sub, off, lhs, product());
      else return lhs;
    }
  }

  expr_node_ptr product() {
    auto lhs = unary();
    for (;;) {
      skip();
      std::size_t off = pos_;
      if (eat('*')) lhs = fold(expr_op::mul, off, lhs, unary());
      else if (eat('/')) lhs = fold(expr_op::div, off, lhs, unary());
      else return lhs;
    }
  }

  expr_node_ptr unary() {
    skip();
    std::size_t off = pos_;
    if (eat('-')) {
      auto a = unary();
      if (a->op == expr_op::num) return number(-a->value, off);
      return make(expr_op::neg, off, a);
    }
    return power();
  }

  expr_node_ptr power() {
    auto base = primary();
    skip();
    std::size_t off = pos_;
    if (eat('^')) return fold(expr_op::pow, off, base, unary());
    return base;
  }

  expr_node_ptr primary() {
    skip();
    std::size_t off = pos_;
    if (pos_ >= s_.size()) fail({"number", "identifier", "(", "-"});
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = sum();
      if (!eat(')')) fail({")", "+", "-", "*", "/", "^"});
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      static const std::pair<const char*, expr_op> funcs[] = {
          {"exp", expr_op::exp}, {"log", expr_op::log}, {"sin", expr_op::sin},
          {"cos", expr_op::cos}, {"sqrt", expr_op::sqrt}};
      for (auto& [fname, fop] : funcs) {
        if (name == fname) {
          if (!eat('(')) fail({"("});
          auto arg = sum();
          if (!eat(')')) fail({")", "+", "-", "*", "/", "^"});
          return make(fop, off, arg);
        }
      }
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == name) {
          auto n = std::make_shared<expr_node>();
          n->op = expr_op::var;
          n->var = static_cast<int>(i);
          n->offset = off;
          return n;
        }
      }
      std::string known;
      for (std::size_t i = 0; i < coords_.size(); ++i) known += (i ? ", " : "") + coords_[i];
      throw expr_error(error_kind::config, off,
                       "unknown identifier '" + name + "' (coordinates: " + known + ")", {}, name);
    }
    fail({"number", "identifier", "(", "-"});
  }

  expr_node_ptr literal() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_, ++k;
      return k;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) fail({"digit"});
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail({"digit"});
    }
    double v = 0;
    auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (r.ec != std::errc() || !std::isfinite(v)) {
      pos_ = start;
      throw expr_error(error_kind::config, start, "numeric literal out of range");
    }
    return number(v, start);
  }
};

}  // namespace detail

/// Parsed scalar expression. Immutable; copies share the tree.
class expr {
 public:
  expr() : expr(constant(0)) {}

  static expr parse(std::string_view text, std::vector<std::string> coords) {
    auto names = std::make_shared<const std::vector<std::string>>(std::move(coords));
    auto root = detail::parser(text, *names).run();
    return expr(std::move(root), std::move(names));
  }

  static expr constant(double v, std::vector<std::string> coords = {}) {
    auto n = std::make_shared<expr_node>();
    n->op = expr_op::num;
    n->value = v;
    return expr(n, std::make_shared<const std::vector<std::string>>(std::move(coords)));
  }

  const expr_node& root() const { return *root_; }
  const std::vector<std::string>& coords() const { return *coords_; }

  bool is_constant() const { return vars_.empty(); }
  double constant_value() const { return root_->value; }
  const std::set<int>& variables() const { return vars_; }

  /// Fully parenthesized canonical text; numbers in shortest round-trip form.
  std::string print() const {
    std::string out;
    print(*root_, out);
    return out;
  }

  /// Evaluates at x (length >= number of coordinates). Non-finite
  /// intermediate results raise a domain fault naming the sub-expression.
  template <class T>
  T evaluate_raw(const T* x) const {
    T stack[kMaxStack];
    int top = 0;
    for (const auto& in : code_) {
      const expr_node& n = *in.node;
      switch (n.op) {
        case expr_op::num: stack[top++] = static_cast<T>(n.value); continue;
        case expr_op::var: stack[top++] = x[n.var]; continue;
        case expr_op::neg: stack[top - 1] = -stack[top - 1]; continue;
        default: break;
      }
      T r;
      if (detail::is_binary(n.op)) {
        T u = stack[top - 2], v = stack[top - 1];
        --top;
        switch (n.op) {
          case expr_op::add: r = u + v; break;
          case expr_op::sub: r = u - v; break;
          case expr_op::mul: r = u * v; break;
          case expr_op::div:
            if (v == 0) fault(n, "division by zero");
            r = u / v;
            break;
          default: r = std::pow(u, v); break;
        }
      } else {
        T u = stack[top - 1];
        switch (n.op) {
          case expr_op::log:
            if (!(u > 0)) fault(n, "log of nonpositive value");
            r = std::log(u);
            break;
          case expr_op::sqrt:
            if (u < 0) fault(n, "sqrt of negative value");
            r = std::sqrt(u);
            break;
          case expr_op::exp: r = std::exp(u); break;
          case expr_op::sin: r = std::sin(u); break;
          default: r = std::cos(u); break;
        }
      }
      if (!std::isfinite(r)) fault(n, "non-finite result");
      stack[top - 1] = r;
    }
    return stack[0];
  }

  template <class Derived>
  auto evaluate(const Eigen::MatrixBase<Derived>& p) const {
    using T = typename Derived::Scalar;
    if (p.size() < static_cast<Eigen::Index>(coords_->size()))
      throw error(error_kind::internal, "evaluation point has fewer components than coordinates");
    typename Derived::PlainObject q = p;
    return evaluate_raw<T>(q.data());
  }

  real operator()(const point& p) const { return evaluate(p); }

 private:
  static constexpr int kMaxStack = 256;

  struct instr {
    const expr_node* node;
  };

  expr_node_ptr root_;
  std::shared_ptr<const std::vector<std::string>> coords_;
  std::vector<instr> code_;
  std::set<int> vars_;

  expr(expr_node_ptr root, std::shared_ptr<const std::vector<std::string>> names)
      : root_(std::move(root)), coords_(std::move(names)) {
    int depth = 0, peak = 0;
    compile(*root_, depth, peak);
    if (peak > kMaxStack)
      throw expr_error(error_kind::config, 0, "expression nested too deeply");
  }

  void compile(const expr_node& n, int& depth, int& peak) {
    if (n.a) compile(*n.a, depth, peak);
    if (n.b) compile(*n.b, depth, peak);
    if (n.op == expr_op::num || n.op == expr_op::var) {
      ++depth;
      if (n.op == expr_op::var) vars_.insert(n.var);
    } else if (detail::is_binary(n.op)) {
      --depth;
    }
    peak = std::max(peak, depth);
    code_.push_back({&n});
  }

  [[noreturn]] void fault(const expr_node& n, const std::string& what) const {
    std::string sub;
    print(n, sub);
    throw expr_error(error_kind::domain, n.offset, what + " in " + sub);
  }

  void print(const expr_node& n, std::string& out) const {
    switch (n.op) {
      case expr_op::num:
        if (n.value < 0 || (n.value == 0 && std::signbit(n.value)))
          out += "(-" + detail::format_number(-n.value) + ")";
        else
          out += detail::format_number(n.value);
        return;
      case expr_op::var: out += (*coords_)[n.var]; return;
      case expr_op::neg:
        out += "(-";
        print(*n.a, out);
        out += ')';
        return;
      default: break;
    }
    if (detail::is_function(n.op)) {
      out += detail::op_text(n.op);
      out += '(';
      print(*n.a, out);
      out += ')';
      return;
    }
    out += '(';
    print(*n.a, out);
    out += ' ';
    out += detail::op_text(n.op);
    out += ' ';
    print(*n.b, out);
    out += ')';
  }
};

/// Structural equality of two trees (offsets ignored).
inline bool same_structure(const expr_node& a, const expr_node& b) {
  if (a.op != b.op) return false;
  if (a.op == expr_op::num)
    return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
  if (a.op == expr_op::var) return a.var == b.var;
  if ((a.a == nullptr) != (b.a == nullptr) || (a.b == nullptr) != (b.b == nullptr)) return false;
  if (a.a && !same_structure(*a.a, *b.a)) return false;
  if (a.b && !same_structure(*a.b, *b.b)) return false;
  return true;
}

/// Coordinate names t_1..t_s, x_1..x_2n in chart order.
inline std::vector<std::string> coordinate_names(int n, int s) {
  std::vector<std::string> out;
  for (int i = 1; i <= s; ++i) out.push_back("t_" + std::to_string(i));
  for (int i = 1; i <= 2 * n; ++i) out.push_back("x_" + std::to_string(i));
  return out;
}

}  // namespace kenlab
