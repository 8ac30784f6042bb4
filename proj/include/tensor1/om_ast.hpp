#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tensor1/span.hpp"

namespace tensor1::om {

struct OMNode;
using NodePtr = std::shared_ptr<const OMNode>;

struct Symbol {
    std::string cd;
    std::string name;
};

struct Variable {
    std::string name;
};

// Arbitrary-precision integer literal, stored in canonical decimal form
// (optional leading '-', no leading zeros, "-0" normalized to "0").
struct Integer {
    std::string digits;

    std::optional<std::int64_t> to_int64() const;
    double to_double() const;
};

struct Float {
    double value;
};

struct Application {
    NodePtr head;  // Symbol or Application
    std::vector<NodePtr> args;  // non-empty
};

// Explicit finite summation over an integer range:
//   sum over `var` from `lower` to `upper` of `body`.
// In the XML encoding this is the fixed shape
//   OMA(arith1:sum, OMA(interval1:integer_interval, lower, upper),
//       OMBIND(fns1:lambda, OMBVAR(OMV var), body)).
struct SumBinder {
    std::string var;
    NodePtr lower;
    NodePtr upper;
    NodePtr body;
};

struct OMNode {
    std::variant<Symbol, Variable, Integer, Float, Application, SumBinder> node;
    SourceSpan span;

    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&node);
    }
    bool is_symbol(std::string_view cd, std::string_view name) const {
        const auto* s = get_if<Symbol>();
        return s && s->cd == cd && s->name == name;
    }
};

// Structural equality, ignoring spans. Floats compare by bit pattern.
bool structurally_equal(const OMNode& a, const OMNode& b);

// OpenMath name grammar as accepted here: first character letter or '_',
// then letters, digits, '_' or '-'. The interior hyphen admits the
// Levi-Civita symbol name.
bool valid_name(std::string_view s);

// --- construction helpers (programmatic ASTs carry default spans) ---
NodePtr sym(std::string cd, std::string name);
NodePtr var(std::string name);
NodePtr integer(std::int64_t value);
NodePtr integer_digits(std::string digits);
NodePtr floating(double value);
NodePtr apply(NodePtr head, std::vector<NodePtr> args);
NodePtr sum(std::string var, NodePtr lower, NodePtr upper, NodePtr body);

// --- parsing and serialization ---

// Parses the OpenMath XML subset (OMOBJ, OMA, OMS, OMV, OMI, OMF, plus the
// fixed summation shape above). Throws EngineError with codes XmlSyntax,
// UnsupportedElement or BadName.
NodePtr parse_xml(std::string_view input);

// Canonical serialization: 2-space indentation, attribute order cd,name,
// LF line endings, trailing newline. parse_xml(serialize_xml(n)) is
// structurally equal to n.
std::string serialize_xml(const OMNode& node);

// Parses the compact grammar (docs/compact-grammar.md). Throws EngineError
// with codes CompactSyntax or AmbiguousName.
NodePtr parse_compact(std::string_view input);

// --- symbol dictionaries ---

inline constexpr const char* kTensorCd = "tensor1";
inline constexpr const char* kArithCd = "arith1";
inline constexpr const char* kIntervalCd = "interval1";
inline constexpr const char* kFnsCd = "fns1";
inline constexpr const char* kLinalgCd = "linalg1";

// The eleven tensor1 symbols, in content-dictionary order.
const std::vector<std::string>& tensor1_symbols();

// The reserved frame placeholder (not part of the emitted CD).
inline constexpr const char* kUnspecified = "unspecified";

bool is_tensor1_name(std::string_view name);  // includes "unspecified"
bool is_arith1_name(std::string_view name);   // plus, times, minus, divide, power, unary_minus

}  // namespace tensor1::om
