#include <map>
#include <optional>
#include <set>

#include "tensor1/semantics.hpp"

namespace tensor1::sem {

namespace {

using om::OMNode;

struct ArityRule {
    int min_args;
    int max_args;  // -1 = unbounded; 0/0 = bare symbol, never applied
};

const std::map<std::pair<std::string, std::string>, ArityRule>& arity_rules() {
    static const std::map<std::pair<std::string, std::string>, ArityRule> rules = {
        {{"tensor1", "tuple"}, {1, -1}},
        {{"tensor1", "tuple_selector"}, {2, 2}},
        {{"tensor1", "Cartesian"}, {1, 1}},
        {{"tensor1", "unit_Cartesian"}, {1, 1}},
        {{"tensor1", "Kronecker_tensor"}, {0, 0}},
        {{"tensor1", "basis_selector"}, {2, 2}},
        {{"tensor1", "tensor_selector"}, {3, 3}},
        {{"tensor1", "contra_index"}, {1, 1}},
        {{"tensor1", "covar_index"}, {1, 1}},
        {{"tensor1", "metric_tensor"}, {0, 0}},
        {{"tensor1", "Levi-Civita"}, {1, 1}},
        {{"tensor1", "unspecified"}, {0, 0}},
        {{"arith1", "plus"}, {2, -1}},
        {{"arith1", "times"}, {2, -1}},
        {{"arith1", "minus"}, {2, 2}},
        {{"arith1", "divide"}, {2, 2}},
        {{"arith1", "power"}, {2, 2}},
        {{"arith1", "unary_minus"}, {1, 1}},
        {{"linalg1", "vector_selector"}, {2, 2}},
    };
    return rules;
}

class Validator {
public:
    Validator(const Environment& env, std::vector<Diagnostic>& diags)
        : env_(env), diags_(diags) {}

    void run(const OMNode& node) {
        walk(node);
        check_index_pairing(node);
    }

private:
    const Environment& env_;
    std::vector<Diagnostic>& diags_;

    void error(Errc code, std::string msg, const SourceSpan& span) {
        diags_.push_back({Severity::Error, code, std::move(msg), span});
    }
    void warning(Errc code, std::string msg, const SourceSpan& span) {
        diags_.push_back({Severity::Warning, code, std::move(msg), span});
    }

    static const om::Symbol* head_symbol(const om::Application& app) {
        return app.head->get_if<om::Symbol>();
    }

    static bool is_index_application(const OMNode& n, const char* which) {
        const auto* app = n.get_if<om::Application>();
        if (!app) return false;
        return app->head->is_symbol(om::kTensorCd, which);
    }

    static bool is_any_index_application(const OMNode& n) {
        return is_index_application(n, "contra_index") || is_index_application(n, "covar_index");
    }

    // Integer literal value of a node, if it is one.
    static std::optional<long long> literal_int(const OMNode& n) {
        if (const auto* i = n.get_if<om::Integer>()) return i->to_int64();
        return std::nullopt;
    }

    // Checks a natural-number argument: literal floats are rejected,
    // literal integers must be >= 1 and <= `dim` when a bound is known.
    void check_natural(const OMNode& n, const char* what, long long dim_bound = -1) {
        if (n.get_if<om::Float>()) {
            error(Errc::IndexNotNatural, std::string(what) + " must be a natural number", n.span);
            return;
        }
        if (const auto* i = n.get_if<om::Integer>()) {
            auto v = i->to_int64();
            if (!v || *v < 1) {
                error(Errc::IndexOutOfRange,
                      std::string(what) + " must be at least 1, got " + i->digits, n.span);
            } else if (dim_bound > 0 && *v > dim_bound) {
                error(Errc::IndexOutOfRange, std::string(what) + " " + i->digits +
                                                 " exceeds the dimension " +
                                                 std::to_string(dim_bound),
                      n.span);
            }
        }
    }

    // Statically known (order, dim) of a tensor_selector first argument;
    // either may be -1 when unknown.
    std::pair<long long, long long> tensor_shape(const OMNode& n, const OMNode& frame_arg) {
        long long frame_dim = -1;
        if (const auto* v = frame_arg.get_if<om::Variable>()) {
            if (const FramePtr* f = env_.find_frame(v->name)) frame_dim = (*f)->dim();
        }
        if (const auto* v = n.get_if<om::Variable>()) {
            if (const TensorValue* t = env_.find_tensor(v->name)) return {t->order(), t->dim};
            return {-1, -1};
        }
        if (n.is_symbol(om::kTensorCd, "Kronecker_tensor") ||
            n.is_symbol(om::kTensorCd, "metric_tensor"))
            return {2, frame_dim};
        if (const auto* app = n.get_if<om::Application>()) {
            if (app->head->is_symbol(om::kTensorCd, "Levi-Civita") && app->args.size() == 1) {
                if (auto v = literal_int(*app->args[0]); v && *v >= 1) return {*v, *v};
            }
        }
        return {-1, -1};
    }

    void check_tensor_selector(const om::Application& app) {
        if (app.args.size() != 3) return;  // arity reported separately
        const OMNode& indexes = *app.args[1];
        auto [order, dim] = tensor_shape(*app.args[0], *app.args[2]);

        const auto* idx_tuple = indexes.get_if<om::Application>();
        if (!idx_tuple || !idx_tuple->head->is_symbol(om::kTensorCd, "tuple")) {
            // a variable may hold a tuple at evaluation time; only literal
            // non-tuples are statically wrong
            if (!indexes.get_if<om::Variable>())
                error(Errc::IndexExpected,
                      "tensor_selector expects a tuple of contra_index/covar_index applications",
                      indexes.span);
            return;
        }
        for (const auto& el : idx_tuple->args) {
            if (!is_any_index_application(*el)) {
                error(Errc::IndexExpected,
                      "tensor index tuples may contain only contra_index or covar_index "
                      "applications",
                      el->span);
            } else {
                const auto* ix = el->get_if<om::Application>();
                if (ix->args.size() == 1)
                    check_natural(*ix->args[0], "tensor index", dim);
            }
        }
        if (order >= 0 && static_cast<long long>(idx_tuple->args.size()) != order) {
            error(Errc::IndexCountMismatch,
                  "tensor of order " + std::to_string(order) + " selected with " +
                      std::to_string(idx_tuple->args.size()) + " indexes",
                  indexes.span);
        }
    }

    void check_application(const om::Application& app, const SourceSpan& span) {
        const om::Symbol* head = head_symbol(app);
        if (!head) {
            error(Errc::UnsupportedSymbol, "application head must be a known symbol", app.head->span);
            return;
        }
        auto it = arity_rules().find({head->cd, head->name});
        if (it == arity_rules().end()) {
            error(Errc::UnsupportedSymbol,
                  "unsupported symbol " + head->cd + ":" + head->name, app.head->span);
            return;
        }
        const ArityRule& rule = it->second;
        int argc = static_cast<int>(app.args.size());
        if (rule.max_args == 0) {
            error(Errc::ArityMismatch,
                  head->cd + ":" + head->name + " is a constant and takes no arguments", span);
            return;
        }
        if (argc < rule.min_args || (rule.max_args >= 0 && argc > rule.max_args)) {
            std::string expect = rule.max_args < 0
                                     ? "at least " + std::to_string(rule.min_args)
                                     : rule.min_args == rule.max_args
                                           ? std::to_string(rule.min_args)
                                           : std::to_string(rule.min_args) + ".." +
                                                 std::to_string(rule.max_args);
            error(Errc::ArityMismatch, head->cd + ":" + head->name + " expects " + expect +
                                           " argument(s), got " + std::to_string(argc),
                  span);
            return;
        }

        if (head->cd == om::kTensorCd) {
            const std::string& s = head->name;
            if (s == "Cartesian" || s == "unit_Cartesian" || s == "contra_index" ||
                s == "covar_index")
                check_natural(*app.args[0], (s + " argument").c_str());
            if (s == "Levi-Civita") {
                if (app.args[0]->get_if<om::Float>()) {
                    error(Errc::IndexNotNatural, "Levi-Civita dimension must be a natural number",
                          app.args[0]->span);
                } else if (auto v = literal_int(*app.args[0]); v && *v < 1) {
                    error(Errc::BadDimension, "Levi-Civita dimension must be at least 1",
                          app.args[0]->span);
                }
            }
            if (s == "tuple_selector") {
                long long len = -1;
                if (const auto* t = app.args[0]->get_if<om::Application>()) {
                    if (t->head->is_symbol(om::kTensorCd, "tuple"))
                        len = static_cast<long long>(t->args.size());
                } else if (const auto* v = app.args[0]->get_if<om::Variable>()) {
                    if (const ValueList* t = env_.find_tuple(v->name))
                        len = static_cast<long long>(t->size());
                }
                check_natural(*app.args[1], "tuple_selector index", len);
            }
            if (s == "basis_selector") {
                if (!is_any_index_application(*app.args[1]))
                    error(Errc::IndexExpected,
                          "basis_selector expects a contra_index or covar_index application as "
                          "its second argument",
                          app.args[1]->span);
            }
            if (s == "tensor_selector") check_tensor_selector(app);
        } else if (head->cd == om::kLinalgCd && head->name == "vector_selector") {
            check_natural(*app.args[0], "vector_selector index");
            const OMNode& target = *app.args[1];
            bool coordinate_tuple = false;
            if (const auto* v = target.get_if<om::Variable>()) {
                coordinate_tuple = env_.find_tuple(v->name) != nullptr;
            } else if (const auto* t = target.get_if<om::Application>()) {
                coordinate_tuple = t->head->is_symbol(om::kTensorCd, "tuple");
            }
            if (coordinate_tuple)
                warning(Errc::CoordinateTupleNotVector,
                        "vector_selector applied to a coordinate tuple; coordinate tuples do "
                        "not transform as vectors, use tuple_selector",
                        target.span);
        }
    }

    void walk(const OMNode& node) {
        if (const auto* app = node.get_if<om::Application>()) {
            check_application(*app, node.span);
            if (app->head->get_if<om::Application>()) walk(*app->head);
            for (const auto& arg : app->args) walk(*arg);
        } else if (const auto* s = node.get_if<om::SumBinder>()) {
            if (s->lower->get_if<om::Float>())
                error(Errc::IndexNotNatural, "summation bound must be an integer", s->lower->span);
            if (s->upper->get_if<om::Float>())
                error(Errc::IndexNotNatural, "summation bound must be an integer", s->upper->span);
            walk(*s->lower);
            walk(*s->upper);
            walk(*s->body);
        } else if (const auto* sym = node.get_if<om::Symbol>()) {
            auto it = arity_rules().find({sym->cd, sym->name});
            if (it == arity_rules().end())
                error(Errc::UnsupportedSymbol, "unsupported symbol " + sym->cd + ":" + sym->name,
                      node.span);
        }
    }

    // --- explicit-summation rule ---

    struct IndexUse {
        bool contra = false;
        bool covar = false;
        SourceSpan span;
    };

    void collect_index_uses(const OMNode& node, std::set<std::string>& bound,
                            std::map<std::string, IndexUse>& uses) {
        if (const auto* app = node.get_if<om::Application>()) {
            bool contra = app->head->is_symbol(om::kTensorCd, "contra_index");
            bool covar = app->head->is_symbol(om::kTensorCd, "covar_index");
            if ((contra || covar) && app->args.size() == 1) {
                if (const auto* v = app->args[0]->get_if<om::Variable>()) {
                    if (!bound.count(v->name)) {
                        IndexUse& u = uses[v->name];
                        if (!u.contra && !u.covar) u.span = node.span;
                        u.contra |= contra;
                        u.covar |= covar;
                    }
                    return;
                }
            }
            if (app->head->get_if<om::Application>()) collect_index_uses(*app->head, bound, uses);
            for (const auto& arg : app->args) collect_index_uses(*arg, bound, uses);
        } else if (const auto* s = node.get_if<om::SumBinder>()) {
            collect_index_uses(*s->lower, bound, uses);
            collect_index_uses(*s->upper, bound, uses);
            bool inserted = bound.insert(s->var).second;
            collect_index_uses(*s->body, bound, uses);
            if (inserted) bound.erase(s->var);
        }
    }

    void check_index_pairing(const OMNode& node) {
        std::set<std::string> bound;
        std::map<std::string, IndexUse> uses;
        collect_index_uses(node, bound, uses);
        for (const auto& [name, use] : uses) {
            if (use.contra && use.covar)
                error(Errc::ImplicitEinstein,
                      "index variable '" + name +
                          "' is paired contravariant/covariant without an explicit summation "
                          "binder",
                      use.span);
        }
    }
};

}  // namespace

std::vector<Diagnostic> validate(const om::OMNode& node, const Environment& env) {
    std::vector<Diagnostic> diags;
    Validator(env, diags).run(node);
    return diags;
}

}  // namespace tensor1::sem
