#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tensor1/span.hpp"

namespace tensor1::ad {

// Forward-mode differentiation scalar: a value plus one partial derivative
// per input direction. All duals in a computation share the same partials
// length; mixing lengths is a programming error and throws
// std::invalid_argument.
class Dual {
public:
    Dual(double value, std::size_t n) : value_(value), partials_(n, 0.0) {}

    static Dual variable(double value, std::size_t n, std::size_t slot);

    double value() const { return value_; }
    const std::vector<double>& partials() const { return partials_; }
    std::size_t size() const { return partials_.size(); }

    friend Dual operator+(const Dual& a, const Dual& b);
    friend Dual operator-(const Dual& a, const Dual& b);
    friend Dual operator*(const Dual& a, const Dual& b);
    friend Dual operator/(const Dual& a, const Dual& b);
    friend Dual operator-(const Dual& a);
    // f(x) with f(x.value) = value and f'(x.value) = derivative
    friend Dual chain(const Dual& x, double value, double derivative);
    friend Dual atan2(const Dual& y, const Dual& x);

private:
    static void check_sizes(const Dual& a, const Dual& b);

    double value_;
    std::vector<double> partials_;
};

Dual sin(const Dual& x);
Dual cos(const Dual& x);
Dual tan(const Dual& x);
Dual exp(const Dual& x);
Dual ln(const Dual& x);
Dual sqrt(const Dual& x);
Dual pow_int(const Dual& x, int exponent);
Dual atan2(const Dual& y, const Dual& x);

enum class Op {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,  // integer exponent only; general powers go through Exp/Ln
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Atan2,
};

struct ScalarExpr;
using ExprPtr = std::shared_ptr<const ScalarExpr>;

// Immutable scalar expression tree over slot-numbered variables. `span` is
// meaningful for expressions produced by parse_scalar.
struct ScalarExpr {
    Op op = Op::Const;
    double value = 0.0;  // Const
    int slot = 0;        // Var
    int exponent = 0;    // Pow
    ExprPtr a;
    ExprPtr b;
    SourceSpan span;
};

ExprPtr constant(double v);
ExprPtr variable(int slot);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr pow_int(ExprPtr a, int exponent);
ExprPtr apply_unary(Op op, ExprPtr a);
ExprPtr apply_atan2(ExprPtr y, ExprPtr x);

// Largest Var slot in the tree, or -1 when there is none.
int max_var_slot(const ScalarExpr& e);

// Plain evaluation. Throws EngineError(Errc::DomainError) for ln of a
// non-positive value, division by zero and sqrt of a negative value,
// carrying the offending sub-expression's span and rendering.
double eval_scalar(const ScalarExpr& e, std::span<const double> point);

// One forward pass with direction `seed` active: the result's partials
// vector is (d expr / d x_seed) * e_seed.
Dual eval_dual(const ScalarExpr& e, std::span<const double> point, std::size_t seed);

// One forward pass with every direction active: the result's partials
// vector is the full gradient at `point`.
Dual eval_gradient(const ScalarExpr& e, std::span<const double> point);

// Jacobian of a coordinate map: entry (i, j) = d exprs[i] / d x_j,
// row-major, size exprs.size() x point.size().
std::vector<double> jacobian(std::span<const ExprPtr> exprs, std::span<const double> point);

// Parses the scalar expression grammar used by chart definition files:
// infix + - * /, integer powers with '^', unary minus, parentheses, the
// functions sin cos tan exp ln sqrt atan2, numeric literals, and the
// variables x1..x<arity>. See docs/compact-grammar.md.
ExprPtr parse_scalar(std::string_view text, int arity);

// Compact infix rendering, used in diagnostics.
std::string to_string(const ScalarExpr& e);

}  // namespace tensor1::ad
