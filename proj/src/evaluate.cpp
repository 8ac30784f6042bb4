#include <atomic>
#include <cmath>

#include "tensor1/config.hpp"
#include "tensor1/semantics.hpp"

namespace tensor1::sem {

namespace {

using om::OMNode;

[[noreturn]] void fail(Errc code, std::string msg, const SourceSpan& span) {
    throw EngineError(code, std::move(msg), span);
}

long long require_int(double v, const SourceSpan& span, const char* what) {
    double rounded = std::nearbyint(v);
    if (std::fabs(v - rounded) > 1e-9 || std::fabs(v) > 9.0e15)
        fail(Errc::IndexNotNatural, std::string(what) + " must be an integer, got " +
                                        std::to_string(v), span);
    return static_cast<long long>(rounded);
}

const char* value_kind(const Value& v) {
    switch (v.v.index()) {
        case 0: return "scalar";
        case 1: return "tensor";
        case 2: return "tuple";
        case 3: return "index";
        case 4: return "frame";
        default: return "chart";
    }
}

// Anonymous frames built from basis tuple literals get distinct chart
// names so that frames from different literals never compare equal.
std::string next_basis_chart_name() {
    static std::atomic<unsigned> counter{0};
    return "basis-literal#" + std::to_string(counter.fetch_add(1) + 1);
}

class Evaluator {
public:
    Evaluator(const Environment& env, FramePtr context) : env_(env), context_(std::move(context)) {}

    Value eval(const OMNode& node) {
        if (const auto* i = node.get_if<om::Integer>()) return Value{i->to_double()};
        if (const auto* f = node.get_if<om::Float>()) return Value{f->value};
        if (const auto* v = node.get_if<om::Variable>()) return eval_variable(*v, node.span);
        if (const auto* s = node.get_if<om::Symbol>()) return eval_symbol(*s, node.span);
        if (const auto* a = node.get_if<om::Application>()) return eval_application(*a, node.span);
        return eval_sum(*node.get_if<om::SumBinder>(), node.span);
    }

private:
    const Environment& env_;
    FramePtr context_;
    std::vector<std::pair<std::string, double>> locals_;  // innermost last

    const double* find_local(const std::string& name) const {
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
            if (it->first == name) return &it->second;
        return nullptr;
    }

    Value eval_variable(const om::Variable& v, const SourceSpan& span) {
        if (const double* local = find_local(v.name)) return Value{*local};
        if (const double* s = env_.find_scalar(v.name)) return Value{*s};
        if (const TensorValue* t = env_.find_tensor(v.name)) return Value{*t};
        if (const ValueList* t = env_.find_tuple(v.name)) return Value{*t};
        if (const FramePtr* f = env_.find_frame(v.name)) return Value{FrameRef{*f, v.name}};
        if (const ChartPtr* c = env_.find_chart(v.name)) return Value{ChartRef{*c}};
        fail(Errc::UnboundVariable, "unbound variable '" + v.name + "'", span);
    }

    Value eval_symbol(const om::Symbol& s, const SourceSpan& span) {
        if (s.cd == om::kTensorCd) {
            if (s.name == om::kUnspecified) return Value{FrameRef{nullptr, om::kUnspecified}};
            if (s.name == "Kronecker_tensor") {
                if (!context_)
                    fail(Errc::FrameRequired,
                         "Kronecker_tensor outside tensor_selector needs a context frame to fix "
                         "its dimension",
                         span);
                return Value{kronecker(context_->dim())};
            }
            if (s.name == "metric_tensor") {
                if (!context_)
                    fail(Errc::FrameRequired, "metric_tensor needs a frame", span);
                return Value{metric_of(context_)};
            }
        }
        fail(Errc::UnsupportedSymbol, "symbol " + s.cd + ":" + s.name +
                                          " cannot be evaluated on its own", span);
    }

    static TensorValue metric_of(const FramePtr& frame) {
        return make_tensor(frame->dim(), {Variance::Covar, Variance::Covar}, frame->metric.a,
                           frame);
    }

    long long index_value(const OMNode& node, const char* what) {
        if (const auto* i = node.get_if<om::Integer>()) {
            auto v = i->to_int64();
            if (!v) fail(Errc::IndexOutOfRange, std::string(what) + " literal is too large", node.span);
            return *v;
        }
        Value v = eval(node);
        if (!v.is_scalar())
            fail(Errc::TypeMismatch, std::string(what) + " must be a number, got " +
                                         value_kind(v), node.span);
        return require_int(v.scalar(), node.span, what);
    }

    long long natural_index(const OMNode& node, const char* what) {
        long long v = index_value(node, what);
        if (v < 1)
            fail(Errc::IndexOutOfRange, std::string(what) + " must be at least 1, got " +
                                            std::to_string(v), node.span);
        return v;
    }

    // --- frame operands ---

    // Accepts a frame name, the reserved unspecified symbol, or a basis
    // tuple literal. Returns a null frame for "unspecified".
    FramePtr frame_operand(const OMNode& node) {
        Value v = eval(node);
        if (const FrameRef* f = v.frame_ref()) return f->frame;
        if (const ValueList* t = v.tuple()) return basis_literal_frame(*t, node.span);
        fail(Errc::TypeMismatch,
             std::string("expected a frame (name, basis tuple or unspecified), got ") +
                 value_kind(v), node.span);
    }

    FramePtr basis_literal_frame(const ValueList& vectors, const SourceSpan& span) {
        if (vectors.empty())
            fail(Errc::TypeMismatch, "a basis tuple needs at least one vector", span);
        int n = static_cast<int>(vectors.size());
        std::vector<TensorValue> cart;
        FramePtr common;
        for (const Value& v : vectors) {
            const TensorValue* t = v.tensor();
            if (!t || t->order() != 1 || t->signature[0] != Variance::Contra)
                fail(Errc::TypeMismatch,
                     "basis tuple entries must be order-1 contravariant vectors", span);
            if (t->dim != n)
                fail(Errc::DimMismatch,
                     "basis tuple of " + std::to_string(n) + " vectors needs dimension " +
                         std::to_string(n) + ", got " + std::to_string(t->dim), span);
            if (t->frame) {
                if (common && !same_frame(*common, *t->frame))
                    fail(Errc::FrameMismatch, "basis tuple vectors are bound to different frames",
                         span);
                common = t->frame;
            }
            cart.push_back(*t);
        }

        // Express every vector in ambient Cartesian components.
        std::vector<double> anchor;
        if (common) {
            FramePtr cart_frame = make_frame(cartesian_chart(n), common->cartesian_point);
            for (auto& t : cart) t = t.frame ? transform(t, cart_frame) : t;
            anchor = common->cartesian_point;
        } else if (context_ && context_->dim() == n) {
            anchor = context_->cartesian_point;
        } else {
            anchor.assign(static_cast<std::size_t>(n), 0.0);
        }

        // Affine chart x = anchor + B x', anchored at x' = 0: its basis is
        // exactly B and its metric B^T B.
        std::vector<ad::ExprPtr> to;
        for (int j = 0; j < n; ++j) {
            ad::ExprPtr e = ad::constant(anchor[static_cast<std::size_t>(j)]);
            for (int i = 0; i < n; ++i) {
                double coef = cart[static_cast<std::size_t>(i)].components[static_cast<std::size_t>(j)];
                e = ad::add(e, ad::mul(ad::constant(coef), ad::variable(i)));
            }
            to.push_back(e);
        }
        ChartPtr chart = make_chart(next_basis_chart_name(), n, std::move(to));
        return make_frame(chart, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    }

    // --- tensor1 application forms ---

    Value eval_tuple(const om::Application& app, const SourceSpan& span) {
        ValueList items;
        for (const auto& arg : app.args) items.push_back(eval(*arg));
        for (std::size_t i = 1; i < items.size(); ++i)
            if (items[i].v.index() != items[0].v.index())
                fail(Errc::TypeMismatch,
                     std::string("tuple elements must be homogeneous: element 1 is ") +
                         value_kind(items[0]) + ", element " + std::to_string(i + 1) + " is " +
                         value_kind(items[i]), span);
        return Value{std::move(items)};
    }

    Value eval_tuple_selector(const om::Application& app) {
        Value target = eval(*app.args[0]);
        const ValueList* tuple = target.tuple();
        if (!tuple)
            fail(Errc::TypeMismatch, std::string("tuple_selector expects a tuple, got ") +
                                         value_kind(target), app.args[0]->span);
        long long index = natural_index(*app.args[1], "tuple_selector index");
        if (index > static_cast<long long>(tuple->size()))
            fail(Errc::IndexOutOfRange, "tuple index " + std::to_string(index) +
                                            " out of range 1.." + std::to_string(tuple->size()),
                 app.args[1]->span);
        return (*tuple)[static_cast<std::size_t>(index - 1)];
    }

    Value eval_cartesian(const om::Application& app, const SourceSpan& span) {
        long long index = natural_index(*app.args[0], "Cartesian coordinate index");
        if (!context_)
            fail(Errc::FrameRequired,
                 "Cartesian(i) needs a context frame to supply the evaluation point", span);
        int n = context_->dim();
        if (index > n)
            fail(Errc::IndexOutOfRange, "Cartesian index " + std::to_string(index) +
                                            " out of range 1.." + std::to_string(n), span);
        return Value{context_->cartesian_point[static_cast<std::size_t>(index - 1)]};
    }

    Value eval_unit_cartesian(const om::Application& app, const SourceSpan& span) {
        long long index = natural_index(*app.args[0], "unit_Cartesian index");
        if (!context_)
            fail(Errc::FrameRequired,
                 "unit_Cartesian(i) needs a context frame to fix the dimension and point", span);
        int n = context_->dim();
        if (index > n)
            fail(Errc::IndexOutOfRange, "unit_Cartesian index " + std::to_string(index) +
                                            " out of range 1.." + std::to_string(n), span);
        FramePtr cart = make_frame(cartesian_chart(n), context_->cartesian_point);
        std::vector<double> c(static_cast<std::size_t>(n), 0.0);
        c[static_cast<std::size_t>(index - 1)] = 1.0;
        return Value{make_tensor(n, {Variance::Contra}, std::move(c), cart)};
    }

    Value eval_index(const om::Application& app, Variance variance) {
        long long v = natural_index(*app.args[0], "tensor index");
        return Value{IndexKind{variance, v}};
    }

    Value eval_levi_civita(const om::Application& app) {
        long long n = natural_index(*app.args[0], "Levi-Civita dimension");
        if (n > limits().max_dim)
            fail(Errc::SizeLimit, "Levi-Civita dimension " + std::to_string(n) +
                                      " exceeds the cap", app.args[0]->span);
        return Value{levi_civita(static_cast<int>(n))};
    }

    Value eval_basis_selector(const om::Application& app, const SourceSpan& span) {
        Value idx = eval(*app.args[1]);
        const IndexKind* index = idx.index();
        if (!index)
            fail(Errc::IndexExpected,
                 "basis_selector expects a contra_index or covar_index application",
                 app.args[1]->span);
        FramePtr frame = frame_operand(*app.args[0]);
        if (!frame)
            fail(Errc::FrameRequired, "basis_selector needs a specified basis", app.args[0]->span);
        int n = frame->dim();
        if (index->value > n)
            fail(Errc::IndexOutOfRange, "basis index " + std::to_string(index->value) +
                                            " out of range 1.." + std::to_string(n), span);
        FramePtr cart = make_frame(cartesian_chart(n), frame->cartesian_point);
        std::vector<double> c(static_cast<std::size_t>(n));
        int k = static_cast<int>(index->value) - 1;
        if (index->variance == Variance::Covar) {
            // basis vector g_k, contravariant Cartesian components
            for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = frame->basis.at(j, k);
            return Value{make_tensor(n, {Variance::Contra}, std::move(c), cart)};
        }
        // dual covector g^k, covariant Cartesian components
        for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = frame->dual_basis.at(k, j);
        return Value{make_tensor(n, {Variance::Covar}, std::move(c), cart)};
    }

    std::vector<IndexKind> index_tuple(const OMNode& node) {
        Value v = eval(node);
        const ValueList* tuple = v.tuple();
        if (!tuple)
            fail(Errc::IndexExpected,
                 std::string("tensor_selector expects a tuple of indexes, got ") + value_kind(v),
                 node.span);
        std::vector<IndexKind> out;
        for (const Value& item : *tuple) {
            const IndexKind* ix = item.index();
            if (!ix)
                fail(Errc::IndexExpected,
                     "tensor index tuples may contain only contra_index or covar_index "
                     "applications", node.span);
            out.push_back(*ix);
        }
        return out;
    }

    Value eval_tensor_selector(const om::Application& app, const SourceSpan& span) {
        FramePtr requested = frame_operand(*app.args[2]);
        std::vector<IndexKind> indexes = index_tuple(*app.args[1]);

        // Kronecker with an unspecified frame reads directly: the mixed
        // identity has the same components in every basis and dimension.
        const OMNode& tensor_node = *app.args[0];
        if (tensor_node.is_symbol(om::kTensorCd, "Kronecker_tensor") && !requested) {
            if (indexes.size() != 2)
                fail(Errc::IndexCountMismatch, "Kronecker_tensor has order 2", app.args[1]->span);
            if (indexes[0].variance == indexes[1].variance)
                fail(Errc::FrameRequired,
                     "raising or lowering a Kronecker index requires a frame", span);
            return Value{indexes[0].value == indexes[1].value ? 1.0 : 0.0};
        }

        TensorValue t = tensor_operand(tensor_node, requested);

        if (static_cast<int>(indexes.size()) != t.order())
            fail(Errc::IndexCountMismatch,
                 "tensor of order " + std::to_string(t.order()) + " selected with " +
                     std::to_string(indexes.size()) + " indexes", app.args[1]->span);
        for (const IndexKind& ix : indexes)
            if (ix.value < 1 || ix.value > t.dim)
                fail(Errc::IndexOutOfRange, "index " + std::to_string(ix.value) +
                                                " out of range 1.." + std::to_string(t.dim),
                     app.args[1]->span);

        if (requested) {
            if (t.frame && !same_frame(*t.frame, *requested))
                t = transform(t, requested);
            else if (!t.frame)
                t = with_frame(std::move(t), requested);
            // variance adaptation against the requested frame's metric
            for (std::size_t s = 0; s < indexes.size(); ++s) {
                if (indexes[s].variance == t.signature[s]) continue;
                t = indexes[s].variance == Variance::Covar
                        ? lower_index(t, static_cast<int>(s), requested)
                        : raise_index(t, static_cast<int>(s), requested);
            }
        } else {
            for (std::size_t s = 0; s < indexes.size(); ++s)
                if (indexes[s].variance != t.signature[s])
                    fail(Errc::FrameRequired,
                         "index " + std::to_string(s + 1) + " is " +
                             variance_name(indexes[s].variance) + " but the tensor slot is " +
                             variance_name(t.signature[s]) +
                             "; raising or lowering requires a frame", span);
        }

        std::vector<long long> idx;
        for (const IndexKind& ix : indexes) idx.push_back(ix.value);
        return Value{t.at(idx)};
    }

    TensorValue tensor_operand(const OMNode& node, const FramePtr& frame_hint) {
        if (node.is_symbol(om::kTensorCd, "Kronecker_tensor")) {
            if (!frame_hint)
                fail(Errc::FrameRequired, "Kronecker_tensor needs a frame or a context frame",
                     node.span);
            return kronecker(frame_hint->dim());
        }
        if (node.is_symbol(om::kTensorCd, "metric_tensor")) {
            if (!frame_hint)
                fail(Errc::FrameRequired, "metric_tensor needs a specified frame", node.span);
            return metric_of(frame_hint);
        }
        Value v = eval(node);
        if (const TensorValue* t = v.tensor()) return *t;
        fail(Errc::TypeMismatch, std::string("tensor_selector expects a tensor, got ") +
                                     value_kind(v), node.span);
    }

    // --- arithmetic ---

    Value eval_arith(const om::Application& app, const std::string& name, const SourceSpan& span) {
        std::vector<Value> args;
        for (const auto& arg : app.args) args.push_back(eval(*arg));

        auto all_scalars = [&] {
            for (const Value& v : args)
                if (!v.is_scalar()) return false;
            return true;
        };

        if (name == "plus" || name == "minus") {
            double sign = name == "minus" ? -1.0 : 1.0;
            if (all_scalars()) {
                double acc = args[0].scalar();
                for (std::size_t i = 1; i < args.size(); ++i)
                    acc += sign * args[i].scalar();
                return Value{acc};
            }
            const TensorValue* first = args[0].tensor();
            if (!first) fail(Errc::TypeMismatch, "cannot mix scalars and tensors in a sum", span);
            TensorValue acc = *first;
            for (std::size_t i = 1; i < args.size(); ++i) {
                const TensorValue* t = args[i].tensor();
                if (!t) fail(Errc::TypeMismatch, "cannot mix scalars and tensors in a sum", span);
                acc = sign > 0 ? tensor_add(acc, *t) : tensor_sub(acc, *t);
            }
            return Value{std::move(acc)};
        }
        if (name == "times") {
            double scalar = 1.0;
            const TensorValue* tensor = nullptr;
            for (const Value& v : args) {
                if (v.is_scalar()) {
                    scalar *= v.scalar();
                } else if (const TensorValue* t = v.tensor()) {
                    if (tensor)
                        fail(Errc::TypeMismatch,
                             "tensor-tensor products must be written as explicit component "
                             "sums", span);
                    tensor = t;
                } else {
                    fail(Errc::TypeMismatch, std::string("cannot multiply a ") + value_kind(v),
                         span);
                }
            }
            if (tensor) return Value{tensor_scale(*tensor, scalar)};
            return Value{scalar};
        }
        if (name == "divide") {
            const Value& num = args[0];
            if (!args[1].is_scalar())
                fail(Errc::TypeMismatch, "divisor must be a scalar", span);
            double d = args[1].scalar();
            if (d == 0.0) fail(Errc::DomainError, "division by zero", span);
            if (num.is_scalar()) return Value{num.scalar() / d};
            if (const TensorValue* t = num.tensor()) return Value{tensor_scale(*t, 1.0 / d)};
            fail(Errc::TypeMismatch, std::string("cannot divide a ") + value_kind(num), span);
        }
        if (name == "power") {
            if (!args[0].is_scalar() || !args[1].is_scalar())
                fail(Errc::TypeMismatch, "power expects scalars", span);
            double base = args[0].scalar(), expo = args[1].scalar();
            if (base == 0.0 && expo < 0.0) fail(Errc::DomainError, "zero to a negative power", span);
            if (base < 0.0 && expo != std::nearbyint(expo))
                fail(Errc::DomainError, "negative base with a non-integer exponent", span);
            return Value{std::pow(base, expo)};
        }
        // unary_minus
        if (args[0].is_scalar()) return Value{-args[0].scalar()};
        if (const TensorValue* t = args[0].tensor()) return Value{tensor_scale(*t, -1.0)};
        fail(Errc::TypeMismatch, std::string("cannot negate a ") + value_kind(args[0]), span);
    }

    Value eval_vector_selector(const om::Application& app, const SourceSpan& span) {
        long long index = natural_index(*app.args[0], "vector_selector index");
        Value target = eval(*app.args[1]);
        if (const ValueList* tuple = target.tuple()) {
            if (index > static_cast<long long>(tuple->size()))
                fail(Errc::IndexOutOfRange, "index " + std::to_string(index) +
                                                " out of range 1.." + std::to_string(tuple->size()),
                     span);
            return (*tuple)[static_cast<std::size_t>(index - 1)];
        }
        if (const TensorValue* t = target.tensor()) {
            if (t->order() != 1)
                fail(Errc::TypeMismatch, "vector_selector expects an order-1 tensor", span);
            if (index > t->dim)
                fail(Errc::IndexOutOfRange, "index " + std::to_string(index) +
                                                " out of range 1.." + std::to_string(t->dim), span);
            return Value{t->components[static_cast<std::size_t>(index - 1)]};
        }
        fail(Errc::TypeMismatch, std::string("vector_selector expects a vector or tuple, got ") +
                                     value_kind(target), span);
    }

    Value eval_application(const om::Application& app, const SourceSpan& span) {
        const om::Symbol* head = app.head->get_if<om::Symbol>();
        if (!head)
            fail(Errc::UnsupportedSymbol, "application head must be a known symbol",
                 app.head->span);

        if (head->cd == om::kTensorCd) {
            const std::string& s = head->name;
            if (s == "tuple") return eval_tuple(app, span);
            if (s == "tuple_selector") return eval_tuple_selector(app);
            if (s == "Cartesian") return eval_cartesian(app, span);
            if (s == "unit_Cartesian") return eval_unit_cartesian(app, span);
            if (s == "contra_index") return eval_index(app, Variance::Contra);
            if (s == "covar_index") return eval_index(app, Variance::Covar);
            if (s == "Levi-Civita") return eval_levi_civita(app);
            if (s == "basis_selector") return eval_basis_selector(app, span);
            if (s == "tensor_selector") return eval_tensor_selector(app, span);
        } else if (head->cd == om::kArithCd && om::is_arith1_name(head->name)) {
            return eval_arith(app, head->name, span);
        } else if (head->cd == om::kLinalgCd && head->name == "vector_selector") {
            return eval_vector_selector(app, span);
        }
        fail(Errc::UnsupportedSymbol, "unsupported symbol " + head->cd + ":" + head->name,
             app.head->span);
    }

    Value eval_sum(const om::SumBinder& s, const SourceSpan& span) {
        long long lo = index_value(*s.lower, "summation lower bound");
        long long hi = index_value(*s.upper, "summation upper bound");
        Value acc{0.0};
        bool first = true;
        for (long long k = lo; k <= hi; ++k) {
            locals_.emplace_back(s.var, static_cast<double>(k));
            Value term = eval(*s.body);
            locals_.pop_back();
            if (first) {
                acc = std::move(term);
                first = false;
                continue;
            }
            if (acc.is_scalar() && term.is_scalar()) {
                acc = Value{acc.scalar() + term.scalar()};
            } else if (acc.tensor() && term.tensor()) {
                acc = Value{tensor_add(*acc.tensor(), *term.tensor())};
            } else {
                fail(Errc::TypeMismatch,
                     std::string("summation terms must be all scalars or all tensors, got ") +
                         value_kind(acc) + " and " + value_kind(term), span);
            }
        }
        return acc;
    }
};

}  // namespace

Value evaluate(const om::OMNode& node, const Environment& env, const FramePtr& context_frame) {
    return Evaluator(env, context_frame).eval(node);
}

TensorValue check_curl_cartesian(const Mat& partials, const FramePtr& frame) {
    if (!frame) throw EngineError(Errc::UnspecifiedFrame, "curl needs a Cartesian 3-frame");
    if (frame->dim() != 3 || partials.n != 3)
        throw EngineError(Errc::DimMismatch, "curl is defined for 3x3 partials in a 3-frame");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::fabs(frame->basis.at(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
                throw EngineError(Errc::FrameMismatch,
                                  "curl from raw partials is validated only in a Cartesian frame");

    TensorValue eps = levi_civita(3);
    std::vector<double> w(3, 0.0);
    // (curl v)_i = sum_jk eps_ijk d_j v_k with v_k = v^k in Cartesian
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                w[static_cast<std::size_t>(i)] +=
                    eps.components[static_cast<std::size_t>(i * 9 + j * 3 + k)] *
                    partials.at(k, j);
    return make_tensor(3, {Variance::Covar}, std::move(w), frame);
}

}  // namespace tensor1::sem
