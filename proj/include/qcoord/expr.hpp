#ifndef QCOORD_EXPR_HPP
#define QCOORD_EXPR_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcoord/domain.hpp"

namespace qcoord {

/// Base for errors raised while turning text into an Expr. `offset` is the
/// zero-based byte position the parser was looking at.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A variable that the declared arity does not provide (`y` in a 1D
/// function, or the reserved parameter name `t`).
class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// f is undefined at `point`: sqrt/log of a bad argument, division by zero,
/// a non-integer power of a negative base, or a non-finite result.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, Point point, int arity)
      : std::domain_error(what), point_(point), arity_(arity) {}
  Point point() const { return point_; }
  int arity() const { return arity_; }

 private:
  Point point_;
  int arity_;
};

enum class Op : unsigned char {
  Const,
  VarX,
  VarY,
  Neg,
  Abs,
  Sqrt,
  Exp,
  Log,
  Sin,
  Cos,
  Floor,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Min,
  Max,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  double value = 0;  // Const only
  NodePtr lhs;       // unary operand or left operand
  NodePtr rhs;       // right operand of binary ops
};

/// An immutable parsed expression in `x` (arity 1) or `x`, `y` (arity 2).
///
/// The tree is compiled once into a postfix program; evaluation walks that
/// program, so two evaluations at the same point are bit-identical and an
/// Expr may be shared freely between threads.
class Expr {
 public:
  Expr(NodePtr root, int arity);

  int arity() const { return arity_; }
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  /// Evaluates an arity-1 expression.
  double operator()(double x) const;
  /// Evaluates an arity-2 expression.
  double operator()(double x, double y) const;
  double eval(double x, std::optional<double> y = std::nullopt) const;

  /// Fully parenthesised text; parsing it back evaluates bit-identically.
  std::string to_string() const;

 private:
  struct Instr {
    Op op;
    double value;
  };

  double run(double x, double y) const;

  NodePtr root_;
  int arity_;
  std::shared_ptr<const std::vector<Instr>> program_;
  int stack_depth_ = 0;
};

/// Parses `text` as a function of `arity` variables (1: x, 2: x and y).
///
/// Grammar (lowest to highest precedence): `+ -`, `* /`, unary `-`, `^`
/// (right associative); calls abs sqrt exp log sin cos floor with one
/// argument, min max with two; the constant `pi`.
Expr parse(std::string_view text, int arity);

/// Freezes one co-ordinate of an arity-2 expression at `value`, returning the
/// arity-1 partial mapping in the remaining co-ordinate (renamed `x`).
/// Evaluation agrees bit-for-bit with the 2D expression at the same point.
Expr restrict(const Expr& e, Axis axis, double value);

/// Formats a double so that parsing the text yields the same double.
std::string format_number(double v);

}  // namespace qcoord

#endif  // QCOORD_EXPR_HPP
