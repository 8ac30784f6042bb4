#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tensor1/errors.hpp"
#include "tensor1/om_ast.hpp"
#include "tensor1/tensor.hpp"

namespace tensor1::sem {

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity;
    Errc code;
    std::string message;
    SourceSpan span;
};

// "severity code line:col message" — one line, machine-parseable.
std::string format_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);

struct Value;
using ValueList = std::vector<Value>;

// A frame binding; a null frame means the reserved `unspecified` value.
struct FrameRef {
    FramePtr frame;
    std::string name;  // registry name, or "unspecified"
};

struct ChartRef {
    ChartPtr chart;
};

struct Value {
    std::variant<double, TensorValue, ValueList, IndexKind, FrameRef, ChartRef> v;

    bool is_scalar() const { return std::holds_alternative<double>(v); }
    double scalar() const { return std::get<double>(v); }
    const TensorValue* tensor() const { return std::get_if<TensorValue>(&v); }
    const ValueList* tuple() const { return std::get_if<ValueList>(&v); }
    const IndexKind* index() const { return std::get_if<IndexKind>(&v); }
    const FrameRef* frame_ref() const { return std::get_if<FrameRef>(&v); }
};

// Name -> binding registry. Names are unique across all five maps;
// add_* throws SchemaError on duplicates.
class Environment {
public:
    void add_chart(const std::string& name, ChartPtr chart);
    void add_frame(const std::string& name, FramePtr frame);
    void add_tensor(const std::string& name, TensorValue tensor);
    void add_tuple(const std::string& name, ValueList values);
    void add_scalar(const std::string& name, double value);

    const std::map<std::string, ChartPtr>& charts() const { return charts_; }
    const std::map<std::string, FramePtr>& frames() const { return frames_; }
    const std::map<std::string, TensorValue>& tensors() const { return tensors_; }
    const std::map<std::string, ValueList>& tuples() const { return tuples_; }
    const std::map<std::string, double>& scalars() const { return scalars_; }

    const ChartPtr* find_chart(const std::string& name) const;
    const FramePtr* find_frame(const std::string& name) const;
    const TensorValue* find_tensor(const std::string& name) const;
    const ValueList* find_tuple(const std::string& name) const;
    const double* find_scalar(const std::string& name) const;
    bool bound(const std::string& name) const;

private:
    void claim(const std::string& name);

    std::map<std::string, ChartPtr> charts_;
    std::map<std::string, FramePtr> frames_;
    std::map<std::string, TensorValue> tensors_;
    std::map<std::string, ValueList> tuples_;
    std::map<std::string, double> scalars_;
};

// Registers cartesian2, cartesian3, polar and spherical.
void add_builtin_charts(Environment& env);

// Loads the environment JSON schema (docs/file-formats.md): charts (by
// file path or inline), frames, tensors, tuples, scalars. Relative chart
// paths resolve against `base_dir`. Throws SchemaError / IoError.
Environment load_environment_file(const std::string& path);
Environment load_environment_json(const std::string& json_text, const std::string& base_dir);

// Loads a chart definition file {name, dim, to_cartesian, from_cartesian?}.
ChartPtr load_chart_file(const std::string& path);
ChartPtr load_chart_json(const std::string& json_text);

// Static checks; never throws. Errors block evaluation, warnings do not.
std::vector<Diagnostic> validate(const om::OMNode& node, const Environment& env);

// Evaluates a validated node. `context_frame` grounds the point-dependent
// symbols Cartesian and unit_Cartesian and is otherwise optional. Throws
// EngineError with semantic codes.
Value evaluate(const om::OMNode& node, const Environment& env,
               const FramePtr& context_frame = nullptr);

// Curl of a vector field from user-supplied partial derivatives,
// partials(i, j) = d v^i / d x^j, in a Cartesian 3-frame:
// (curl v)_i = sum_jk eps_ijk d_j v_k.
TensorValue check_curl_cartesian(const Mat& partials, const FramePtr& frame);

}  // namespace tensor1::sem
