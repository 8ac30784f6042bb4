#include "tensor1/tensor.hpp"

#include <cmath>
#include <sstream>

#include "tensor1/config.hpp"
#include "tensor1/errors.hpp"
#include "tensor1/kernels.hpp"

namespace tensor1 {

const char* variance_name(Variance v) { return v == Variance::Contra ? "contra" : "covar"; }

namespace {

std::string point_string(std::span<const double> p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

void check_point_arity(const Chart& chart, std::span<const double> point) {
    if (static_cast<int>(point.size()) != chart.dim)
        throw EngineError(Errc::DimMismatch,
                          "chart '" + chart.name + "' expects " + std::to_string(chart.dim) +
                              " coordinates, got " + std::to_string(point.size()));
}

}  // namespace

ChartPtr make_chart(std::string name, int dim, std::vector<ad::ExprPtr> to_cartesian,
                    std::vector<ad::ExprPtr> from_cartesian) {
    if (dim < 1) throw EngineError(Errc::BadDimension, "chart dimension must be positive");
    if (dim > limits().max_dim)
        throw EngineError(Errc::SizeLimit, "chart dimension " + std::to_string(dim) +
                                               " exceeds the cap of " +
                                               std::to_string(limits().max_dim));
    if (static_cast<int>(to_cartesian.size()) != dim)
        throw EngineError(Errc::SchemaError, "chart '" + name + "' needs " + std::to_string(dim) +
                                                 " to_cartesian expressions");
    if (!from_cartesian.empty() && static_cast<int>(from_cartesian.size()) != dim)
        throw EngineError(Errc::SchemaError, "chart '" + name + "' needs " + std::to_string(dim) +
                                                 " from_cartesian expressions");
    for (const auto& e : to_cartesian)
        if (ad::max_var_slot(*e) >= dim)
            throw EngineError(Errc::SchemaError,
                              "chart '" + name + "' uses a coordinate beyond its dimension");
    for (const auto& e : from_cartesian)
        if (ad::max_var_slot(*e) >= dim)
            throw EngineError(Errc::SchemaError,
                              "chart '" + name + "' uses a coordinate beyond its dimension");
    Chart c;
    c.name = std::move(name);
    c.dim = dim;
    c.to_cartesian = std::move(to_cartesian);
    c.from_cartesian = std::move(from_cartesian);
    return std::make_shared<const Chart>(std::move(c));
}

ChartPtr cartesian_chart(int n) {
    if (n < 1) throw EngineError(Errc::BadDimension, "Cartesian chart dimension must be positive");
    std::vector<ad::ExprPtr> identity;
    for (int i = 0; i < n; ++i) identity.push_back(ad::variable(i));
    return make_chart("cartesian" + std::to_string(n), n, identity, identity);
}

ChartPtr polar_chart() {
    using namespace ad;
    std::vector<ExprPtr> to = {mul(variable(0), apply_unary(Op::Cos, variable(1))),
                               mul(variable(0), apply_unary(Op::Sin, variable(1)))};
    std::vector<ExprPtr> from = {
        apply_unary(Op::Sqrt, add(pow_int(variable(0), 2), pow_int(variable(1), 2))),
        apply_atan2(variable(1), variable(0))};
    return make_chart("polar", 2, std::move(to), std::move(from));
}

ChartPtr spherical_chart() {
    using namespace ad;
    ExprPtr r = variable(0), theta = variable(1), phi = variable(2);
    std::vector<ExprPtr> to = {
        mul(r, mul(apply_unary(Op::Sin, theta), apply_unary(Op::Cos, phi))),
        mul(r, mul(apply_unary(Op::Sin, theta), apply_unary(Op::Sin, phi))),
        mul(r, apply_unary(Op::Cos, theta))};
    ExprPtr rho2 = add(pow_int(variable(0), 2), pow_int(variable(1), 2));
    std::vector<ExprPtr> from = {
        apply_unary(Op::Sqrt, add(rho2, pow_int(variable(2), 2))),
        apply_atan2(apply_unary(Op::Sqrt, rho2), variable(2)),
        apply_atan2(variable(1), variable(0))};
    return make_chart("spherical", 3, std::move(to), std::move(from));
}

std::vector<double> chart_to_cartesian(const Chart& chart, std::span<const double> point) {
    check_point_arity(chart, point);
    std::vector<double> out(point.size());
    for (int j = 0; j < chart.dim; ++j)
        out[static_cast<std::size_t>(j)] = ad::eval_scalar(*chart.to_cartesian[static_cast<std::size_t>(j)], point);
    return out;
}

std::vector<double> chart_from_cartesian(const Chart& chart, std::span<const double> point) {
    check_point_arity(chart, point);
    if (!chart.has_inverse())
        throw EngineError(Errc::UnknownChart, "chart '" + chart.name + "' has no inverse map");
    std::vector<double> out(point.size());
    for (int j = 0; j < chart.dim; ++j)
        out[static_cast<std::size_t>(j)] = ad::eval_scalar(*chart.from_cartesian[static_cast<std::size_t>(j)], point);
    return out;
}

FramePtr make_frame(ChartPtr chart, std::vector<double> point) {
    check_point_arity(*chart, point);
    int n = chart->dim;

    Frame f;
    f.chart = std::move(chart);
    f.basis = Mat(n);
    // basis column i = d x / d x'_i, one forward pass per seed direction
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ad::Dual d = ad::eval_dual(*f.chart->to_cartesian[static_cast<std::size_t>(j)], point,
                                       static_cast<std::size_t>(i));
            f.basis.at(j, i) = d.partials()[static_cast<std::size_t>(i)];
        }
    }

    double det = 0.0;
    auto inv = invert(f.basis, &det);
    f.det_basis = det;
    if (!inv || std::fabs(det) < kSingularTolerance)
        throw EngineError(Errc::SingularChart, "chart '" + f.chart->name + "' is singular at " +
                                                   point_string(point));
    f.dual_basis = std::move(*inv);
    f.metric = mat_mul(transpose(f.basis), f.basis);
    auto metric_inv = invert(f.metric);
    if (!metric_inv)
        throw EngineError(Errc::SingularChart, "metric of chart '" + f.chart->name +
                                                   "' is singular at " + point_string(point));
    f.inverse_metric = std::move(*metric_inv);
    f.cartesian_point = chart_to_cartesian(*f.chart, point);
    f.point = std::move(point);
    return std::make_shared<const Frame>(std::move(f));
}

bool same_frame(const Frame& a, const Frame& b) {
    if (&a == &b) return true;
    bool same_chart = a.chart == b.chart ||
                      (a.chart->name == b.chart->name && a.chart->dim == b.chart->dim);
    if (!same_chart || a.point.size() != b.point.size()) return false;
    for (std::size_t i = 0; i < a.point.size(); ++i)
        if (std::fabs(a.point[i] - b.point[i]) > kPointTolerance) return false;
    return true;
}

bool same_ambient_point(const Frame& a, const Frame& b) {
    if (a.cartesian_point.size() != b.cartesian_point.size()) return false;
    for (std::size_t i = 0; i < a.cartesian_point.size(); ++i)
        if (std::fabs(a.cartesian_point[i] - b.cartesian_point[i]) > kPointTolerance) return false;
    return true;
}

std::size_t TensorValue::offset(int dim, std::span<const long long> indexes) {
    std::size_t off = 0;
    for (long long ix : indexes) off = off * static_cast<std::size_t>(dim) + static_cast<std::size_t>(ix - 1);
    return off;
}

double TensorValue::at(std::span<const long long> indexes) const {
    if (static_cast<int>(indexes.size()) != order())
        throw EngineError(Errc::IndexCountMismatch,
                          "expected " + std::to_string(order()) + " indexes, got " +
                              std::to_string(indexes.size()));
    for (long long ix : indexes)
        if (ix < 1 || ix > dim)
            throw EngineError(Errc::IndexOutOfRange, "index " + std::to_string(ix) +
                                                         " out of range 1.." + std::to_string(dim));
    return components[offset(dim, indexes)];
}

TensorValue make_tensor(int dim, Signature signature, std::vector<double> components,
                        FramePtr frame) {
    if (dim < 1) throw EngineError(Errc::BadDimension, "tensor dimension must be positive");
    const Limits& lim = limits();
    if (dim > lim.max_dim)
        throw EngineError(Errc::SizeLimit, "tensor dimension " + std::to_string(dim) +
                                               " exceeds the cap of " + std::to_string(lim.max_dim));
    if (static_cast<int>(signature.size()) > lim.max_order)
        throw EngineError(Errc::SizeLimit, "tensor order " + std::to_string(signature.size()) +
                                               " exceeds the cap of " +
                                               std::to_string(lim.max_order));
    std::size_t expected = 1;
    for (std::size_t s = 0; s < signature.size(); ++s) {
        expected *= static_cast<std::size_t>(dim);
        if (expected > lim.max_components)
            throw EngineError(Errc::SizeLimit, "tensor of dim " + std::to_string(dim) +
                                                   " and order " + std::to_string(signature.size()) +
                                                   " exceeds the component cap of " +
                                                   std::to_string(lim.max_components));
    }
    if (components.size() != expected)
        throw EngineError(Errc::DimMismatch, "component count " + std::to_string(components.size()) +
                                                 " does not match dim^order = " +
                                                 std::to_string(expected));
    if (frame && frame->dim() != dim)
        throw EngineError(Errc::DimMismatch, "tensor dimension " + std::to_string(dim) +
                                                 " does not match frame dimension " +
                                                 std::to_string(frame->dim()));
    return TensorValue{dim, std::move(signature), std::move(components), std::move(frame)};
}

TensorValue with_frame(TensorValue t, FramePtr frame) {
    if (frame && frame->dim() != t.dim)
        throw EngineError(Errc::DimMismatch, "frame dimension " + std::to_string(frame->dim()) +
                                                 " does not match tensor dimension " +
                                                 std::to_string(t.dim));
    t.frame = std::move(frame);
    return t;
}

TensorValue kronecker(int n) {
    if (n < 1) throw EngineError(Errc::BadDimension, "Kronecker dimension must be positive");
    if (n > limits().max_dim)
        throw EngineError(Errc::SizeLimit, "Kronecker dimension " + std::to_string(n) +
                                               " exceeds the cap of " +
                                               std::to_string(limits().max_dim));
    std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i) * n + i] = 1.0;
    return make_tensor(n, {Variance::Contra, Variance::Covar}, std::move(c));
}

TensorValue levi_civita(int n) {
    if (n < 1) throw EngineError(Errc::BadDimension, "Levi-Civita dimension must be positive");
    const Limits& lim = limits();
    if (n > lim.levi_max_dim || n > lim.max_dim || n > lim.max_order)
        throw EngineError(Errc::SizeLimit,
                          "Levi-Civita dimension " + std::to_string(n) + " exceeds the cap of " +
                              std::to_string(std::min(lim.levi_max_dim, std::min(lim.max_dim, lim.max_order))));
    std::vector<double> c(kernels::ipow_index(n, n));
    kernels::levi_civita_fill(c, n);
    return make_tensor(n, Signature(static_cast<std::size_t>(n), Variance::Covar), std::move(c));
}

namespace {

// The frame both operands agree on: equal frames, or the specified one
// when the other is unspecified.
FramePtr merged_frame(const TensorValue& a, const TensorValue& b, const char* what) {
    if (a.frame && b.frame) {
        if (!same_frame(*a.frame, *b.frame))
            throw EngineError(Errc::FrameMismatch,
                              std::string(what) + " operands are bound to different frames");
        return a.frame;
    }
    return a.frame ? a.frame : b.frame;
}

}  // namespace

TensorValue tensor_product(const TensorValue& a, const TensorValue& b) {
    if (a.dim != b.dim)
        throw EngineError(Errc::DimMismatch, "tensor product of dim " + std::to_string(a.dim) +
                                                 " and dim " + std::to_string(b.dim));
    FramePtr frame = merged_frame(a, b, "tensor product");
    Signature sig = a.signature;
    sig.insert(sig.end(), b.signature.begin(), b.signature.end());
    if (static_cast<int>(sig.size()) > limits().max_order)
        throw EngineError(Errc::SizeLimit, "tensor product order " + std::to_string(sig.size()) +
                                               " exceeds the cap of " +
                                               std::to_string(limits().max_order));
    std::vector<double> out(a.components.size() * b.components.size());
    kernels::outer_product(a.components, b.components, out);
    return make_tensor(a.dim, std::move(sig), std::move(out), std::move(frame));
}

TensorValue contract(const TensorValue& t, int slot_a, int slot_b) {
    int order = t.order();
    if (slot_a < 0 || slot_a >= order || slot_b < 0 || slot_b >= order || slot_a == slot_b)
        throw EngineError(Errc::BadSlot, "contraction slots (" + std::to_string(slot_a) + ", " +
                                             std::to_string(slot_b) + ") invalid for order " +
                                             std::to_string(order));
    if (t.signature[static_cast<std::size_t>(slot_a)] == t.signature[static_cast<std::size_t>(slot_b)])
        throw EngineError(Errc::VarianceMismatch,
                          "contraction requires one contravariant and one covariant slot");
    Signature sig;
    for (int s = 0; s < order; ++s)
        if (s != slot_a && s != slot_b) sig.push_back(t.signature[static_cast<std::size_t>(s)]);
    std::vector<double> out(kernels::ipow_index(t.dim, order - 2));
    kernels::contract(t.components, t.dim, order, slot_a, slot_b, out);
    return make_tensor(t.dim, std::move(sig), std::move(out), t.frame);
}

namespace {

void ensure_same_point(const Frame& a, const Frame& b) {
    if (!same_ambient_point(a, b))
        throw EngineError(Errc::PointMismatch,
                          "frames are anchored at different ambient points " +
                              point_string(a.cartesian_point) + " vs " +
                              point_string(b.cartesian_point));
}

TensorValue apply_change_of_basis(const TensorValue& t, const Mat& contra, const Mat& covar,
                                  FramePtr result_frame) {
    std::vector<double> cur = t.components;
    std::vector<double> next(cur.size());
    for (int s = 0; s < t.order(); ++s) {
        const Mat& m = t.signature[static_cast<std::size_t>(s)] == Variance::Contra ? contra : covar;
        kernels::mode_apply(cur, t.dim, t.order(), s, m.a, next);
        std::swap(cur, next);
    }
    return make_tensor(t.dim, t.signature, std::move(cur), std::move(result_frame));
}

}  // namespace

TensorValue transform(const TensorValue& t, const FramePtr& target) {
    if (!target) throw EngineError(Errc::UnspecifiedFrame, "transform target frame is unspecified");
    if (!t.frame)
        throw EngineError(Errc::UnspecifiedFrame,
                          "cannot transform a tensor whose frame is unspecified");
    if (t.dim != target->dim())
        throw EngineError(Errc::DimMismatch, "tensor dimension " + std::to_string(t.dim) +
                                                 " does not match frame dimension " +
                                                 std::to_string(target->dim()));
    if (same_frame(*t.frame, *target)) return with_frame(t, target);
    ensure_same_point(*t.frame, *target);

    // Contra slots: A = target.dual_basis * source.basis. Covar slots:
    // (A^-1)^T = (source.dual_basis * target.basis)^T, the Jacobian chain
    // routed through the common Cartesian frame.
    Mat contra = mat_mul(target->dual_basis, t.frame->basis);
    Mat covar = transpose(mat_mul(t.frame->dual_basis, target->basis));
    return apply_change_of_basis(t, contra, covar, target);
}

namespace {

// Brings t into `frame`: adopts it when the tensor's frame is unspecified,
// transforms when it is anchored elsewhere.
TensorValue resolve_in_frame(const TensorValue& t, const FramePtr& frame, const char* what) {
    if (!frame)
        throw EngineError(Errc::UnspecifiedFrame, std::string(what) + " requires a specified frame");
    if (!t.frame) return with_frame(t, frame);
    if (same_frame(*t.frame, *frame)) return t;
    return transform(t, frame);
}

}  // namespace

TensorValue raise_index(const TensorValue& t, int slot, const FramePtr& frame) {
    if (slot < 0 || slot >= t.order())
        throw EngineError(Errc::BadSlot, "slot " + std::to_string(slot) + " out of range");
    if (t.signature[static_cast<std::size_t>(slot)] != Variance::Covar)
        throw EngineError(Errc::VarianceMismatch, "raise_index expects a covariant slot");
    TensorValue in = resolve_in_frame(t, frame, "raise_index");
    std::vector<double> out(in.components.size());
    kernels::mode_apply(in.components, in.dim, in.order(), slot, frame->inverse_metric.a, out);
    Signature sig = in.signature;
    sig[static_cast<std::size_t>(slot)] = Variance::Contra;
    return make_tensor(in.dim, std::move(sig), std::move(out), frame);
}

TensorValue lower_index(const TensorValue& t, int slot, const FramePtr& frame) {
    if (slot < 0 || slot >= t.order())
        throw EngineError(Errc::BadSlot, "slot " + std::to_string(slot) + " out of range");
    if (t.signature[static_cast<std::size_t>(slot)] != Variance::Contra)
        throw EngineError(Errc::VarianceMismatch, "lower_index expects a contravariant slot");
    TensorValue in = resolve_in_frame(t, frame, "lower_index");
    std::vector<double> out(in.components.size());
    kernels::mode_apply(in.components, in.dim, in.order(), slot, frame->metric.a, out);
    Signature sig = in.signature;
    sig[static_cast<std::size_t>(slot)] = Variance::Covar;
    return make_tensor(in.dim, std::move(sig), std::move(out), frame);
}

double norm_sq(const TensorValue& v, const FramePtr& frame) {
    if (v.order() != 1 || v.signature[0] != Variance::Contra)
        throw EngineError(Errc::VarianceMismatch,
                          "norm_sq expects an order-1 contravariant tensor");
    TensorValue in = resolve_in_frame(v, frame, "norm_sq");
    double acc = 0.0;
    for (int i = 0; i < in.dim; ++i)
        for (int j = 0; j < in.dim; ++j)
            acc += frame->metric.at(i, j) * in.components[static_cast<std::size_t>(i)] *
                   in.components[static_cast<std::size_t>(j)];
    return acc;
}

TensorValue cross_product(const TensorValue& u, const TensorValue& v, const FramePtr& frame) {
    if (u.dim != 3 || v.dim != 3)
        throw EngineError(Errc::DimMismatch, "cross product is defined in dimension 3");
    if (u.order() != 1 || v.order() != 1 || u.signature[0] != Variance::Contra ||
        v.signature[0] != Variance::Contra)
        throw EngineError(Errc::VarianceMismatch,
                          "cross product expects order-1 contravariant tensors");
    merged_frame(u, v, "cross product");  // FrameMismatch when bound to different frames
    TensorValue lhs = resolve_in_frame(u, frame, "cross_product");
    TensorValue rhs = resolve_in_frame(v, frame, "cross_product");

    TensorValue eps = levi_civita(3);
    std::vector<double> w(3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                w[static_cast<std::size_t>(i)] +=
                    eps.components[static_cast<std::size_t>(i * 9 + j * 3 + k)] *
                    lhs.components[static_cast<std::size_t>(j)] *
                    rhs.components[static_cast<std::size_t>(k)];
    return make_tensor(3, {Variance::Covar}, std::move(w), frame);
}

namespace {

TensorValue combine(const TensorValue& a, const TensorValue& b, double sign) {
    if (a.dim != b.dim)
        throw EngineError(Errc::DimMismatch, "tensor sum of dim " + std::to_string(a.dim) +
                                                 " and dim " + std::to_string(b.dim));
    if (a.signature != b.signature)
        throw EngineError(Errc::SignatureMismatch,
                          "tensor sum requires identical variance signatures");
    FramePtr frame = merged_frame(a, b, "tensor sum");
    std::vector<double> out(a.components.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a.components[i] + sign * b.components[i];
    return make_tensor(a.dim, a.signature, std::move(out), std::move(frame));
}

}  // namespace

TensorValue tensor_add(const TensorValue& a, const TensorValue& b) { return combine(a, b, 1.0); }
TensorValue tensor_sub(const TensorValue& a, const TensorValue& b) { return combine(a, b, -1.0); }

TensorValue tensor_scale(const TensorValue& a, double factor) {
    std::vector<double> out(a.components.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.components[i] * factor;
    return make_tensor(a.dim, a.signature, std::move(out), a.frame);
}

}  // namespace tensor1
