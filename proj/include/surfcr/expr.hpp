#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <utility>

#include "surfcr/errors.hpp"
#include "surfcr/jet.hpp"

namespace surfcr {

/// Immutable closed-form scalar expression in the coordinates x1, x2, x3.
///
/// Built from constants, coordinates, + - * /, sin, cos, sqrt and integer
/// powers. The same tree is evaluated on plain doubles or on Jet2, so the
/// derivatives are exact up to rounding.
class Expr {
 public:
  enum class Op { Constant, Coordinate, Add, Sub, Mul, Div, Neg, Sin, Cos, Sqrt, Pow };

  Expr() : Expr(constant(0.0)) {}
  Expr(double c) : Expr(constant(c)) {}  // NOLINT: literals mix into expressions

  static Expr constant(double c) { return Expr(std::make_shared<Node>(Node{Op::Constant, c, 0, {}, {}})); }

  /// Coordinate x_{axis+1}, axis in {0,1,2}.
  static Expr coordinate(int axis) {
    if (axis < 0 || axis > 2) throw IndexOutOfRange("Expr::coordinate: axis must be 0, 1 or 2");
    return Expr(std::make_shared<Node>(Node{Op::Coordinate, 0.0, axis, {}, {}}));
  }

  template <class T>
  T eval(const std::array<T, 3>& x) const {
    return eval_node(*node_, x);
  }

  double operator()(const Vec3& x) const { return eval(std::array<double, 3>{x[0], x[1], x[2]}); }
  Jet2 jet(const Vec3& x) const { return eval(seed(x)); }

  Op op() const noexcept { return node_->op; }

  /// Symbolic partial derivative with respect to x_{axis+1}. No simplification.
  Expr derivative(int axis) const { return Expr(differentiate(node_, axis)); }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
  friend Expr operator-(const Expr& a) { return unary(Op::Neg, a); }
  friend Expr sin(const Expr& a) { return unary(Op::Sin, a); }
  friend Expr cos(const Expr& a) { return unary(Op::Cos, a); }
  friend Expr sqrt(const Expr& a) { return unary(Op::Sqrt, a); }
  friend Expr pow(const Expr& a, int n) {
    return Expr(std::make_shared<Node>(Node{Op::Pow, 0.0, n, a.node_, {}}));
  }

 private:
  struct Node {
    Op op;
    double constant;
    int integer;  // coordinate axis or exponent
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(std::make_shared<Node>(Node{op, 0.0, 0, a.node_, b.node_}));
  }
  static Expr unary(Op op, const Expr& a) {
    return Expr(std::make_shared<Node>(Node{op, 0.0, 0, a.node_, {}}));
  }

  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr differentiate(const NodePtr& n, int axis) {
    const Expr a(n->lhs ? Expr(n->lhs) : Expr());
    const Expr b(n->rhs ? Expr(n->rhs) : Expr());
    auto d = [axis](const Expr& e) { return Expr(differentiate(e.node_, axis)); };
    switch (n->op) {
      case Op::Constant:
        return constant(0.0).node_;
      case Op::Coordinate:
        return constant(n->integer == axis ? 1.0 : 0.0).node_;
      case Op::Add:
        return (d(a) + d(b)).node_;
      case Op::Sub:
        return (d(a) - d(b)).node_;
      case Op::Mul:
        return (d(a) * b + a * d(b)).node_;
      case Op::Div:
        return (d(a) / b - a * d(b) / (b * b)).node_;
      case Op::Neg:
        return (-d(a)).node_;
      case Op::Sin:
        return (cos(a) * d(a)).node_;
      case Op::Cos:
        return (-(sin(a) * d(a))).node_;
      case Op::Sqrt:
        return (d(a) / (2.0 * Expr(n))).node_;
      case Op::Pow:
        if (n->integer == 0) return constant(0.0).node_;
        return (double(n->integer) * pow(a, n->integer - 1) * d(a)).node_;
    }
    return constant(0.0).node_;
  }

  static double checked_div(double a, double b) {
    if (std::abs(b) < detail::kDivisionFloor) throw DomainError("expression: division by zero");
    return a / b;
  }
  static double checked_sqrt(double a) {
    if (a < 0.0) throw DomainError("expression: sqrt of negative value");
    return std::sqrt(a);
  }
  static Jet2 checked_div(const Jet2& a, const Jet2& b) { return a / b; }
  static Jet2 checked_sqrt(const Jet2& a) { return sqrt(a); }

  template <class T>
  static T eval_node(const Node& n, const std::array<T, 3>& x) {
    using std::cos;
    using std::pow;
    using std::sin;
    switch (n.op) {
      case Op::Constant:
        return T(n.constant);
      case Op::Coordinate:
        return x[static_cast<std::size_t>(n.integer)];
      case Op::Add:
        return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
      case Op::Sub:
        return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
      case Op::Mul:
        return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
      case Op::Div:
        return checked_div(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
      case Op::Neg:
        return -eval_node(*n.lhs, x);
      case Op::Sin:
        return sin(eval_node(*n.lhs, x));
      case Op::Cos:
        return cos(eval_node(*n.lhs, x));
      case Op::Sqrt:
        return checked_sqrt(eval_node(*n.lhs, x));
      case Op::Pow:
        return pow(eval_node(*n.lhs, x), n.integer);
    }
    return T(0.0);
  }

  std::shared_ptr<const Node> node_;
};

inline Jet2 eval_jet(const Expr& e, const Vec3& x) { return e.jet(x); }

/// Three component expressions of an ambient vector field.
using VectorExpr = std::array<Expr, 3>;

inline Vec3 eval(const VectorExpr& w, const Vec3& x) { return {w[0](x), w[1](x), w[2](x)}; }

inline JetVec3 eval(const VectorExpr& w, const JetVec3& x) {
  return {w[0].eval(x), w[1].eval(x), w[2].eval(x)};
}

}  // namespace surfcr
