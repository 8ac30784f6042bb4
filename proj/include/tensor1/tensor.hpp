#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tensor1/autodiff.hpp"
#include "tensor1/linalg.hpp"

namespace tensor1 {

enum class Variance { Contra, Covar };
using Signature = std::vector<Variance>;

const char* variance_name(Variance v);  // "contra" / "covar"

// Ambient-point identity tolerance: two frames are anchored at the same
// point when their Cartesian images agree within this bound.
inline constexpr double kPointTolerance = 1e-9;
// A chart is singular at a point when |det J| falls below this bound.
inline constexpr double kSingularTolerance = 1e-12;

// A named differentiable map from chart coordinates to ambient Cartesian
// coordinates. The inverse map is optional and only used to identify
// points. Component j of to_cartesian gives Cartesian coordinate x^j as a
// function of the chart coordinates (variable slots 0..dim-1).
struct Chart {
    std::string name;
    int dim = 0;
    std::vector<ad::ExprPtr> to_cartesian;
    std::vector<ad::ExprPtr> from_cartesian;  // empty when absent

    bool has_inverse() const { return !from_cartesian.empty(); }
};

using ChartPtr = std::shared_ptr<const Chart>;

// Validates and freezes a chart definition. Throws BadDimension, SizeLimit
// or SchemaError (expression arity out of range).
ChartPtr make_chart(std::string name, int dim, std::vector<ad::ExprPtr> to_cartesian,
                    std::vector<ad::ExprPtr> from_cartesian = {});

ChartPtr cartesian_chart(int n);  // identity map, named "cartesian<n>"
ChartPtr polar_chart();           // (r, theta) -> (r cos theta, r sin theta)
ChartPtr spherical_chart();       // physics convention, theta = polar angle

std::vector<double> chart_to_cartesian(const Chart& chart, std::span<const double> point);
// Throws UnknownChart when the chart has no inverse map.
std::vector<double> chart_from_cartesian(const Chart& chart, std::span<const double> point);

// A chart anchored at a point: column i of `basis` holds the Cartesian
// components of the covariant basis vector g_i, row i of `dual_basis` the
// components of the dual covector g^i, and metric = basis^T basis.
struct Frame {
    ChartPtr chart;
    std::vector<double> point;
    std::vector<double> cartesian_point;
    Mat basis;
    Mat dual_basis;
    Mat metric;
    Mat inverse_metric;
    double det_basis = 0.0;

    int dim() const { return chart->dim; }
};

using FramePtr = std::shared_ptr<const Frame>;

// Builds the frame at `point`. Throws SingularChart when |det J| < 1e-12
// and propagates DomainError from the chart expressions.
FramePtr make_frame(ChartPtr chart, std::vector<double> point);

// Same chart (by identity or by name and dimension) anchored at the same
// chart point within 1e-9.
bool same_frame(const Frame& a, const Frame& b);
bool same_ambient_point(const Frame& a, const Frame& b);

// 1-based tensor index with its transformation behavior.
struct IndexKind {
    Variance variance;
    long long value;
};

// Dense tensor: row-major components over `order` slots of extent `dim`,
// with one variance per slot. A null frame means "unspecified": components
// are frame-agnostic or to be interpreted in whatever frame the reader
// supplies.
struct TensorValue {
    int dim = 0;
    Signature signature;
    std::vector<double> components;
    FramePtr frame;  // null = unspecified

    int order() const { return static_cast<int>(signature.size()); }

    // Row-major linear offset of a 1-based index tuple:
    // sum_m (i_m - 1) * dim^(order - m). The rightmost index varies fastest.
    static std::size_t offset(int dim, std::span<const long long> indexes);

    // Bounds-checked component read; throws IndexCountMismatch or
    // IndexOutOfRange.
    double at(std::span<const long long> indexes) const;
};

// Validates dimension/order caps and the component count.
TensorValue make_tensor(int dim, Signature signature, std::vector<double> components,
                        FramePtr frame = nullptr);

// Reinterprets the components in `frame` (no numeric change). Throws
// DimMismatch when the frame dimension differs.
TensorValue with_frame(TensorValue t, FramePtr frame);

// delta^i_j: order 2, signature [Contra, Covar], frame-independent.
TensorValue kronecker(int n);

// Order-n, all-covariant permutation symbol. SizeLimit above the
// configured cap (default n <= 6).
TensorValue levi_civita(int n);

// signature = a.signature ++ b.signature. Frames must match, or one may be
// unspecified; the result carries the specified one.
TensorValue tensor_product(const TensorValue& a, const TensorValue& b);

// Sums the diagonal of one Contra and one Covar slot (either argument
// order); the result drops both slots. Order-0 results are scalar tensors.
TensorValue contract(const TensorValue& t, int slot_a, int slot_b);

// Change of frame at a common ambient point: Contra slots are hit with
// target.dual_basis * source.basis, Covar slots with its inverse
// transpose. Throws UnspecifiedFrame and PointMismatch.
TensorValue transform(const TensorValue& t, const FramePtr& target);

// Metric contraction on one slot; the slot's variance flips, slot order is
// preserved. The tensor is first brought into `frame` (adopting it when
// unspecified, transforming when anchored elsewhere at the same point).
TensorValue raise_index(const TensorValue& t, int slot, const FramePtr& frame);
TensorValue lower_index(const TensorValue& t, int slot, const FramePtr& frame);

// sum_ij g_ij v^i v^j for an order-1 Contra tensor, in `frame`.
double norm_sq(const TensorValue& v, const FramePtr& frame);

// w_i = sum_jk eps_ijk u^j v^k in dimension 3; the result is covariant.
// Operand frames must agree (or be unspecified) before resolving into
// `frame`.
TensorValue cross_product(const TensorValue& u, const TensorValue& v, const FramePtr& frame);

// Componentwise sum/difference; signatures and frames must match.
TensorValue tensor_add(const TensorValue& a, const TensorValue& b);
TensorValue tensor_sub(const TensorValue& a, const TensorValue& b);
TensorValue tensor_scale(const TensorValue& a, double factor);

}  // namespace tensor1
