#include "gencvx/expression.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "gencvx/errors.hpp"

namespace gencvx {

using namespace expr_node;

Expr Expr::literal(double value) { return Expr(std::make_shared<const Node>(Node{Literal{value}})); }

Expr Expr::variable(std::size_t index) {
  if (index == 0) throw DomainError("variables are numbered from 1");
  return Expr(std::make_shared<const Node>(Node{Variable{index}}));
}

Expr Expr::unary(UnaryFn fn, Expr operand) {
  return Expr(std::make_shared<const Node>(Node{Unary{fn, std::move(operand)}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::call(PairFn fn, Expr first, Expr second) {
  return Expr(std::make_shared<const Node>(Node{Call{fn, std::move(first), std::move(second)}}));
}

Expr Expr::power(Expr base, int exponent) {
  return Expr(std::make_shared<const Node>(Node{Power{std::move(base), exponent}}));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::size_t Expr::max_variable() const {
  return std::visit(overloaded{
                        [](const Literal&) -> std::size_t { return 0; },
                        [](const Variable& v) -> std::size_t { return v.index; },
                        [](const Unary& u) { return u.operand.max_variable(); },
                        [](const Binary& b) { return std::max(b.lhs.max_variable(), b.rhs.max_variable()); },
                        [](const Call& c) { return std::max(c.first.max_variable(), c.second.max_variable()); },
                        [](const Power& p) { return p.base.max_variable(); },
                    },
                    node_->data);
}

bool Expr::has_kinks() const {
  return std::visit(overloaded{
                        [](const Literal&) { return false; },
                        [](const Variable&) { return false; },
                        [](const Unary& u) { return u.fn == UnaryFn::abs || u.operand.has_kinks(); },
                        [](const Binary& b) { return b.lhs.has_kinks() || b.rhs.has_kinks(); },
                        [](const Call&) { return true; },
                        [](const Power& p) { return p.base.has_kinks(); },
                    },
                    node_->data);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node_->data;
  const auto& y = b.node_->data;
  if (x.index() != y.index()) return false;
  return std::visit(
      overloaded{
          [&](const Literal& l) { return l.value == std::get<Literal>(y).value; },
          [&](const Variable& v) { return v.index == std::get<Variable>(y).index; },
          [&](const Unary& u) {
            const auto& o = std::get<Unary>(y);
            return u.fn == o.fn && u.operand == o.operand;
          },
          [&](const Binary& bn) {
            const auto& o = std::get<Binary>(y);
            return bn.op == o.op && bn.lhs == o.lhs && bn.rhs == o.rhs;
          },
          [&](const Call& c) {
            const auto& o = std::get<Call>(y);
            return c.fn == o.fn && c.first == o.first && c.second == o.second;
          },
          [&](const Power& p) {
            const auto& o = std::get<Power>(y);
            return p.exponent == o.exponent && p.base == o.base;
          },
      },
      x);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::size_t dimension) : src_(src), dimension_(dimension) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw SyntaxError(at + 1, msg); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(UnaryFn::neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected integer exponent", start);
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      fail("exponent must be an integer literal", start);
    }
    int exponent = 0;
    const auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, exponent);
    if (ec != std::errc() || ptr != src_.data() + pos_) fail("exponent out of range", start);
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') fail("chained powers need parentheses");
    return Expr::power(std::move(base), negative ? -exponent : exponent);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
    if (ec != std::errc() || !std::isfinite(value)) fail("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return Expr::literal(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || index == 0) fail("variables are numbered from x1", start);
      if (index > dimension_) {
        fail("variable " + std::string(name) + " exceeds dimension " + std::to_string(dimension_), start);
      }
      return Expr::variable(index);
    }

    static constexpr std::pair<std::string_view, UnaryFn> kUnary[] = {
        {"exp", UnaryFn::exp}, {"log", UnaryFn::log}, {"sqrt", UnaryFn::sqrt},
        {"abs", UnaryFn::abs}, {"atan", UnaryFn::atan},
    };
    for (const auto& [fname, fn] : kUnary) {
      if (name != fname) continue;
      expect('(');
      Expr arg = parse_expr();
      if (accept(',')) fail(std::string(fname) + " takes one argument", pos_ - 1);
      expect(')');
      return Expr::unary(fn, std::move(arg));
    }
    if (name == "min" || name == "max") {
      expect('(');
      Expr first = parse_expr();
      if (!accept(',')) {
        if (pos_ >= src_.size()) fail("expected ',' but input ended");
        fail(std::string(name) + " takes two arguments");
      }
      Expr second = parse_expr();
      if (accept(',')) fail(std::string(name) + " takes two arguments", pos_ - 1);
      expect(')');
      return Expr::call(name == "min" ? PairFn::min : PairFn::max, std::move(first), std::move(second));
    }
    fail("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  std::size_t dimension_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, std::size_t dimension) {
  if (dimension == 0) throw DomainError("expression dimension must be positive");
  bool blank = true;
  for (char c : source) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw SyntaxError(1, "empty expression");
  return Parser(source, dimension).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_literal(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string_view name_of(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::neg: return "-";
    case UnaryFn::exp: return "exp";
    case UnaryFn::log: return "log";
    case UnaryFn::sqrt: return "sqrt";
    case UnaryFn::abs: return "abs";
    case UnaryFn::atan: return "atan";
  }
  return "?";
}

char symbol_of(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
  }
  return '?';
}

}  // namespace

std::string to_string(const Expr& expr) {
  return std::visit(
      overloaded{
          [](const Literal& l) {
            // Parsed literals are nonnegative; negative ones are printed as a
            // parenthesised negation so they survive a round trip.
            if (std::signbit(l.value)) return "(-" + format_literal(-l.value) + ")";
            return format_literal(l.value);
          },
          [](const Variable& v) { return "x" + std::to_string(v.index); },
          [](const Unary& u) {
            if (u.fn == UnaryFn::neg) return "(-" + to_string(u.operand) + ")";
            return std::string(name_of(u.fn)) + "(" + to_string(u.operand) + ")";
          },
          [](const Binary& b) {
            return "(" + to_string(b.lhs) + " " + symbol_of(b.op) + " " + to_string(b.rhs) + ")";
          },
          [](const Call& c) {
            return std::string(c.fn == PairFn::min ? "min(" : "max(") + to_string(c.first) + ", " +
                   to_string(c.second) + ")";
          },
          [](const Power& p) { return "(" + to_string(p.base) + "^" + std::to_string(p.exponent) + ")"; },
      },
      expr.node().data);
}

// ---------------------------------------------------------------------------
// Evaluation. Both evaluators share the scalar kernels below so the value
// channel of eval_dual is bitwise identical to evaluate().

namespace {

double checked(double v, const Expr& at) {
  if (!std::isfinite(v)) throw EvaluationError("non-finite value in " + to_string(at));
  return v;
}

double apply_unary(UnaryFn fn, double u, const Expr& at) {
  switch (fn) {
    case UnaryFn::neg: return -u;
    case UnaryFn::exp: return checked(std::exp(u), at);
    case UnaryFn::log:
      if (!(u > 0.0)) throw EvaluationError("log of nonpositive value in " + to_string(at));
      return std::log(u);
    case UnaryFn::sqrt:
      if (u < 0.0) throw EvaluationError("sqrt of negative value in " + to_string(at));
      return std::sqrt(u);
    case UnaryFn::abs: return std::fabs(u);
    case UnaryFn::atan: return std::atan(u);
  }
  return u;
}

double apply_binary(BinaryOp op, double a, double b, const Expr& at) {
  switch (op) {
    case BinaryOp::add: return checked(a + b, at);
    case BinaryOp::sub: return checked(a - b, at);
    case BinaryOp::mul: return checked(a * b, at);
    case BinaryOp::div:
      if (b == 0.0) throw EvaluationError("division by zero in " + to_string(at));
      return checked(a / b, at);
  }
  return 0.0;
}

double apply_power(double base, int exponent, const Expr& at) {
  if (exponent < 0 && base == 0.0) throw EvaluationError("division by zero in " + to_string(at));
  return checked(std::pow(base, exponent), at);
}

double eval_node(const Expr& e, std::span<const double> x) {
  return std::visit(overloaded{
                        [](const Literal& l) { return l.value; },
                        [&](const Variable& v) {
                          if (v.index > x.size()) throw DomainError("point dimension below variable index");
                          return x[v.index - 1];
                        },
                        [&](const Unary& u) { return apply_unary(u.fn, eval_node(u.operand, x), e); },
                        [&](const Binary& b) {
                          const double lhs = eval_node(b.lhs, x);
                          const double rhs = eval_node(b.rhs, x);
                          return apply_binary(b.op, lhs, rhs, e);
                        },
                        [&](const Call& c) {
                          const double a = eval_node(c.first, x);
                          const double b = eval_node(c.second, x);
                          if (c.fn == PairFn::min) return a <= b ? a : b;
                          return a >= b ? a : b;
                        },
                        [&](const Power& p) { return apply_power(eval_node(p.base, x), p.exponent, e); },
                    },
                    e.node().data);
}

void axpy(Vector& out, double s, const Vector& v) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * v[i];
}

DualValue dual_node(const Expr& e, std::span<const double> x) {
  const std::size_t n = x.size();
  return std::visit(
      overloaded{
          [&](const Literal& l) { return DualValue{l.value, Vector(n, 0.0), false}; },
          [&](const Variable& v) {
            if (v.index > n) throw DomainError("point dimension below variable index");
            DualValue d{x[v.index - 1], Vector(n, 0.0), false};
            d.derivative[v.index - 1] = 1.0;
            return d;
          },
          [&](const Unary& u) {
            DualValue a = dual_node(u.operand, x);
            DualValue out{apply_unary(u.fn, a.value, e), Vector(n, 0.0), a.nonsmooth_point};
            double slope = 0.0;
            switch (u.fn) {
              case UnaryFn::neg: slope = -1.0; break;
              case UnaryFn::exp: slope = out.value; break;
              case UnaryFn::log: slope = 1.0 / a.value; break;
              case UnaryFn::sqrt:
                if (a.value == 0.0) {
                  out.nonsmooth_point = true;
                } else {
                  slope = 0.5 / out.value;
                }
                break;
              case UnaryFn::abs:
                if (a.value == 0.0) {
                  out.nonsmooth_point = true;
                } else {
                  slope = a.value > 0.0 ? 1.0 : -1.0;
                }
                break;
              case UnaryFn::atan: slope = 1.0 / (1.0 + a.value * a.value); break;
            }
            axpy(out.derivative, slope, a.derivative);
            return out;
          },
          [&](const Binary& b) {
            DualValue l = dual_node(b.lhs, x);
            DualValue r = dual_node(b.rhs, x);
            DualValue out{apply_binary(b.op, l.value, r.value, e), Vector(n, 0.0),
                          l.nonsmooth_point || r.nonsmooth_point};
            switch (b.op) {
              case BinaryOp::add:
                axpy(out.derivative, 1.0, l.derivative);
                axpy(out.derivative, 1.0, r.derivative);
                break;
              case BinaryOp::sub:
                axpy(out.derivative, 1.0, l.derivative);
                axpy(out.derivative, -1.0, r.derivative);
                break;
              case BinaryOp::mul:
                axpy(out.derivative, r.value, l.derivative);
                axpy(out.derivative, l.value, r.derivative);
                break;
              case BinaryOp::div:
                axpy(out.derivative, 1.0 / r.value, l.derivative);
                axpy(out.derivative, -l.value / (r.value * r.value), r.derivative);
                break;
            }
            return out;
          },
          [&](const Call& c) {
            DualValue a = dual_node(c.first, x);
            DualValue b = dual_node(c.second, x);
            const bool flag = a.nonsmooth_point || b.nonsmooth_point || a.value == b.value;
            const bool take_first = c.fn == PairFn::min ? a.value <= b.value : a.value >= b.value;
            DualValue out = take_first ? std::move(a) : std::move(b);
            out.nonsmooth_point = flag;
            return out;
          },
          [&](const Power& p) {
            DualValue a = dual_node(p.base, x);
            DualValue out{apply_power(a.value, p.exponent, e), Vector(n, 0.0), a.nonsmooth_point};
            const double slope =
                p.exponent == 0 ? 0.0 : static_cast<double>(p.exponent) * std::pow(a.value, p.exponent - 1);
            axpy(out.derivative, slope, a.derivative);
            return out;
          },
      },
      e.node().data);
}

}  // namespace

double evaluate(const Expr& expr, std::span<const double> point) { return eval_node(expr, point); }

DualValue eval_dual(const Expr& expr, std::span<const double> point) {
  DualValue d = dual_node(expr, point);
  for (double g : d.derivative) {
    if (!std::isfinite(g)) throw EvaluationError("non-finite derivative in " + to_string(expr));
  }
  return d;
}

}  // namespace gencvx
