#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "gencvx/point.hpp"

namespace gencvx {

enum class BinaryOp { add, sub, mul, div };
enum class UnaryFn { neg, exp, log, sqrt, abs, atan };
enum class PairFn { min, max };

class Expr;

namespace expr_node {
struct Literal {
  double value;
};
struct Variable {
  std::size_t index;  // 1-based: x1, x2, ...
};
struct Unary;
struct Binary;
struct Call;
struct Power;
}  // namespace expr_node

/// Immutable expression tree. Copies share structure; equality is structural.
class Expr {
 public:
  struct Node;

  static Expr literal(double value);
  static Expr variable(std::size_t index);
  static Expr unary(UnaryFn fn, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(PairFn fn, Expr first, Expr second);
  static Expr power(Expr base, int exponent);

  const Node& node() const noexcept { return *node_; }

  // Largest variable index referenced (0 for constant expressions).
  std::size_t max_variable() const;
  // True when the tree contains abs, min or max.
  bool has_kinks() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace expr_node {
struct Unary {
  UnaryFn fn;
  Expr operand;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Call {
  PairFn fn;
  Expr first;
  Expr second;
};
struct Power {
  Expr base;
  int exponent;
};
}  // namespace expr_node

struct Expr::Node {
  std::variant<expr_node::Literal, expr_node::Variable, expr_node::Unary, expr_node::Binary, expr_node::Call,
               expr_node::Power>
      data;
};

// Grammar (whitespace insignificant):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" [ "-" ] integer ] ;
//   primary = number | variable | func1 "(" expr ")"
//           | func2 "(" expr "," expr ")" | "(" expr ")" ;
//   func1   = "exp" | "log" | "sqrt" | "abs" | "atan" ;
//   func2   = "min" | "max" ;
//   variable = "x" integer ;          (* 1 <= index <= dimension *)
//
// Throws SyntaxError carrying the 1-based byte offset of the failure.
Expr parse(std::string_view source, std::size_t dimension);

// Fully parenthesised rendering; parse(to_string(e), n) == e.
std::string to_string(const Expr& expr);

// Plain evaluation. Throws EvaluationError on division by zero, log of a
// nonpositive value, sqrt of a negative value or a non-finite result.
double evaluate(const Expr& expr, std::span<const double> point);

struct DualValue {
  double value = 0.0;
  Vector derivative;
  // Set when some abs/min/max (or sqrt at 0) was evaluated exactly at its
  // kink; the derivative then follows the one-sided convention: abs' (0) = 0,
  // min/max take the first argument's derivative on ties.
  bool nonsmooth_point = false;
};

// Forward-mode automatic differentiation. `value` is bitwise identical to
// evaluate(expr, point).
DualValue eval_dual(const Expr& expr, std::span<const double> point);

}  // namespace gencvx
