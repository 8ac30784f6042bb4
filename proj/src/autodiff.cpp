#include "tensor1/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tensor1/errors.hpp"

namespace tensor1::ad {

namespace {

double ipow(double base, int e) {
    bool invert = e < 0;
    unsigned n = invert ? static_cast<unsigned>(-static_cast<long long>(e))
                        : static_cast<unsigned>(e);
    double out = 1.0, acc = base;
    while (n) {
        if (n & 1u) out *= acc;
        acc *= acc;
        n >>= 1u;
    }
    return invert ? 1.0 / out : out;
}

}  // namespace

void Dual::check_sizes(const Dual& a, const Dual& b) {
    if (a.partials_.size() != b.partials_.size())
        throw std::invalid_argument("dual partials length mismatch: " +
                                    std::to_string(a.partials_.size()) + " vs " +
                                    std::to_string(b.partials_.size()));
}

Dual Dual::variable(double value, std::size_t n, std::size_t slot) {
    if (slot >= n) throw std::invalid_argument("dual seed slot out of range");
    Dual d(value, n);
    d.partials_[slot] = 1.0;
    return d;
}

Dual operator+(const Dual& a, const Dual& b) {
    Dual::check_sizes(a, b);
    Dual out(a.value_ + b.value_, a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.partials_[i] = a.partials_[i] + b.partials_[i];
    return out;
}

Dual operator-(const Dual& a, const Dual& b) {
    Dual::check_sizes(a, b);
    Dual out(a.value_ - b.value_, a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.partials_[i] = a.partials_[i] - b.partials_[i];
    return out;
}

Dual operator*(const Dual& a, const Dual& b) {
    Dual::check_sizes(a, b);
    Dual out(a.value_ * b.value_, a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.partials_[i] = a.partials_[i] * b.value_ + a.value_ * b.partials_[i];
    return out;
}

Dual operator/(const Dual& a, const Dual& b) {
    Dual::check_sizes(a, b);
    Dual out(a.value_ / b.value_, a.size());
    double inv2 = 1.0 / (b.value_ * b.value_);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.partials_[i] = (a.partials_[i] * b.value_ - a.value_ * b.partials_[i]) * inv2;
    return out;
}

Dual operator-(const Dual& a) {
    Dual out(-a.value_, a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.partials_[i] = -a.partials_[i];
    return out;
}

Dual chain(const Dual& x, double value, double derivative) {
    Dual out(value, x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out.partials_[i] = derivative * x.partials_[i];
    return out;
}

Dual sin(const Dual& x) { return chain(x, std::sin(x.value()), std::cos(x.value())); }
Dual cos(const Dual& x) { return chain(x, std::cos(x.value()), -std::sin(x.value())); }

Dual tan(const Dual& x) {
    double c = std::cos(x.value());
    return chain(x, std::tan(x.value()), 1.0 / (c * c));
}

Dual exp(const Dual& x) {
    double e = std::exp(x.value());
    return chain(x, e, e);
}

Dual ln(const Dual& x) { return chain(x, std::log(x.value()), 1.0 / x.value()); }

Dual sqrt(const Dual& x) {
    double r = std::sqrt(x.value());
    return chain(x, r, 0.5 / r);
}

Dual pow_int(const Dual& x, int exponent) {
    if (exponent == 0) return chain(x, 1.0, 0.0);
    return chain(x, ipow(x.value(), exponent), exponent * ipow(x.value(), exponent - 1));
}

Dual atan2(const Dual& y, const Dual& x) {
    Dual::check_sizes(y, x);
    double r2 = x.value() * x.value() + y.value() * y.value();
    Dual out(std::atan2(y.value(), x.value()), y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out.partials_[i] = (x.value() * y.partials_[i] - y.value() * x.partials_[i]) / r2;
    return out;
}

// --- expression trees ---

namespace {

ExprPtr make(ScalarExpr e) { return std::make_shared<ScalarExpr>(std::move(e)); }

[[noreturn]] void domain_error(const ScalarExpr& e, const std::string& what) {
    throw EngineError(Errc::DomainError, what + " in '" + to_string(e) + "'", e.span);
}

}  // namespace

namespace {

ExprPtr node(Op op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    ScalarExpr e;
    e.op = op;
    e.a = std::move(a);
    e.b = std::move(b);
    return make(std::move(e));
}

}  // namespace

ExprPtr constant(double v) {
    ScalarExpr e;
    e.op = Op::Const;
    e.value = v;
    return make(std::move(e));
}

ExprPtr variable(int slot) {
    ScalarExpr e;
    e.op = Op::Var;
    e.slot = slot;
    return make(std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b) { return node(Op::Add, std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return node(Op::Sub, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return node(Op::Mul, std::move(a), std::move(b)); }
ExprPtr div(ExprPtr a, ExprPtr b) { return node(Op::Div, std::move(a), std::move(b)); }
ExprPtr neg(ExprPtr a) { return node(Op::Neg, std::move(a)); }

ExprPtr pow_int(ExprPtr a, int exponent) {
    ScalarExpr e;
    e.op = Op::Pow;
    e.exponent = exponent;
    e.a = std::move(a);
    return make(std::move(e));
}

ExprPtr apply_unary(Op op, ExprPtr a) { return node(op, std::move(a)); }
ExprPtr apply_atan2(ExprPtr y, ExprPtr x) { return node(Op::Atan2, std::move(y), std::move(x)); }

int max_var_slot(const ScalarExpr& e) {
    int out = e.op == Op::Var ? e.slot : -1;
    if (e.a) out = std::max(out, max_var_slot(*e.a));
    if (e.b) out = std::max(out, max_var_slot(*e.b));
    return out;
}

double eval_scalar(const ScalarExpr& e, std::span<const double> point) {
    switch (e.op) {
        case Op::Const: return e.value;
        case Op::Var:
            if (e.slot < 0 || static_cast<std::size_t>(e.slot) >= point.size())
                throw std::invalid_argument("variable slot out of range for point");
            return point[static_cast<std::size_t>(e.slot)];
        case Op::Add: return eval_scalar(*e.a, point) + eval_scalar(*e.b, point);
        case Op::Sub: return eval_scalar(*e.a, point) - eval_scalar(*e.b, point);
        case Op::Mul: return eval_scalar(*e.a, point) * eval_scalar(*e.b, point);
        case Op::Div: {
            double num = eval_scalar(*e.a, point);
            double den = eval_scalar(*e.b, point);
            if (den == 0.0) domain_error(e, "division by zero");
            return num / den;
        }
        case Op::Neg: return -eval_scalar(*e.a, point);
        case Op::Pow: {
            double base = eval_scalar(*e.a, point);
            if (base == 0.0 && e.exponent < 0) domain_error(e, "zero raised to a negative power");
            return ipow(base, e.exponent);
        }
        case Op::Sin: return std::sin(eval_scalar(*e.a, point));
        case Op::Cos: return std::cos(eval_scalar(*e.a, point));
        case Op::Tan: return std::tan(eval_scalar(*e.a, point));
        case Op::Exp: return std::exp(eval_scalar(*e.a, point));
        case Op::Ln: {
            double v = eval_scalar(*e.a, point);
            if (v <= 0.0) domain_error(e, "ln of a non-positive value");
            return std::log(v);
        }
        case Op::Sqrt: {
            double v = eval_scalar(*e.a, point);
            if (v < 0.0) domain_error(e, "sqrt of a negative value");
            return std::sqrt(v);
        }
        case Op::Atan2:
            return std::atan2(eval_scalar(*e.a, point), eval_scalar(*e.b, point));
    }
    throw std::logic_error("unhandled scalar op");
}

namespace {

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// init(slot) supplies the dual seeding for each variable occurrence.
template <class VarInit>
Dual eval(const ScalarExpr& e, std::span<const double> point, std::size_t n,
          const VarInit& init) {
    switch (e.op) {
        case Op::Const: return Dual(e.value, n);
        case Op::Var:
            if (e.slot < 0 || static_cast<std::size_t>(e.slot) >= point.size())
                throw std::invalid_argument("variable slot out of range for point");
            return init(static_cast<std::size_t>(e.slot));
        case Op::Add: return eval(*e.a, point, n, init) + eval(*e.b, point, n, init);
        case Op::Sub: return eval(*e.a, point, n, init) - eval(*e.b, point, n, init);
        case Op::Mul: return eval(*e.a, point, n, init) * eval(*e.b, point, n, init);
        case Op::Div: {
            Dual num = eval(*e.a, point, n, init);
            Dual den = eval(*e.b, point, n, init);
            if (den.value() == 0.0) domain_error(e, "division by zero");
            return num / den;
        }
        case Op::Neg: return -eval(*e.a, point, n, init);
        case Op::Pow: {
            Dual base = eval(*e.a, point, n, init);
            if (base.value() == 0.0 && e.exponent < 0)
                domain_error(e, "zero raised to a negative power");
            return pow_int(base, e.exponent);
        }
        case Op::Sin: return sin(eval(*e.a, point, n, init));
        case Op::Cos: return cos(eval(*e.a, point, n, init));
        case Op::Tan: return tan(eval(*e.a, point, n, init));
        case Op::Exp: return exp(eval(*e.a, point, n, init));
        case Op::Ln: {
            Dual v = eval(*e.a, point, n, init);
            if (v.value() <= 0.0) domain_error(e, "ln of a non-positive value");
            return ln(v);
        }
        case Op::Sqrt: {
            Dual v = eval(*e.a, point, n, init);
            if (v.value() < 0.0) domain_error(e, "sqrt of a negative value");
            if (v.value() == 0.0 && !all_zero(v.partials()))
                domain_error(e, "derivative of sqrt at zero");
            return v.value() == 0.0 ? Dual(0.0, n) : sqrt(v);
        }
        case Op::Atan2: {
            Dual y = eval(*e.a, point, n, init);
            Dual x = eval(*e.b, point, n, init);
            if (x.value() == 0.0 && y.value() == 0.0)
                domain_error(e, "derivative of atan2 at the origin");
            return atan2(y, x);
        }
    }
    throw std::logic_error("unhandled scalar op");
}

}  // namespace

Dual eval_dual(const ScalarExpr& e, std::span<const double> point, std::size_t seed) {
    std::size_t n = point.size();
    if (seed >= n) throw std::invalid_argument("seed index out of range");
    return eval(e, point, n, [&](std::size_t slot) {
        return slot == seed ? Dual::variable(point[slot], n, slot) : Dual(point[slot], n);
    });
}

Dual eval_gradient(const ScalarExpr& e, std::span<const double> point) {
    std::size_t n = point.size();
    return eval(e, point, n,
                [&](std::size_t slot) { return Dual::variable(point[slot], n, slot); });
}

std::vector<double> jacobian(std::span<const ExprPtr> exprs, std::span<const double> point) {
    std::size_t rows = exprs.size(), cols = point.size();
    std::vector<double> out(rows * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        Dual row = eval_gradient(*exprs[i], point);
        for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = row.partials()[j];
    }
    return out;
}

}  // namespace tensor1::ad
