#include "tensor1/om_ast.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>

#include "tensor1/errors.hpp"

namespace tensor1::om {

std::optional<std::int64_t> Integer::to_int64() const {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    return out;
}

double Integer::to_double() const { return std::strtod(digits.c_str(), nullptr); }

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    char c0 = s[0];
    if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_')) return false;
    for (char c : s.substr(1)) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    }
    return true;
}

namespace {

std::string canonical_digits(std::string_view text) {
    bool negative = false;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    while (i + 1 < text.size() && text[i] == '0') ++i;
    std::string body(text.substr(i));
    if (body == "0") negative = false;
    return negative ? "-" + body : body;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

NodePtr sym(std::string cd, std::string name) {
    return std::make_shared<OMNode>(OMNode{Symbol{std::move(cd), std::move(name)}, {}});
}

NodePtr var(std::string name) {
    return std::make_shared<OMNode>(OMNode{Variable{std::move(name)}, {}});
}

NodePtr integer(std::int64_t value) { return integer_digits(std::to_string(value)); }

NodePtr integer_digits(std::string digits) {
    std::string_view body = digits;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.remove_prefix(1);
    if (!all_digits(body))
        throw EngineError(Errc::XmlSyntax, "invalid integer literal '" + digits + "'");
    return std::make_shared<OMNode>(OMNode{Integer{canonical_digits(digits)}, {}});
}

NodePtr floating(double value) {
    return std::make_shared<OMNode>(OMNode{Float{value}, {}});
}

NodePtr apply(NodePtr head, std::vector<NodePtr> args) {
    return std::make_shared<OMNode>(OMNode{Application{std::move(head), std::move(args)}, {}});
}

NodePtr sum(std::string bound, NodePtr lower, NodePtr upper, NodePtr body) {
    return std::make_shared<OMNode>(
        OMNode{SumBinder{std::move(bound), std::move(lower), std::move(upper), std::move(body)}, {}});
}

bool structurally_equal(const OMNode& a, const OMNode& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* s = a.get_if<Symbol>()) {
        const auto* t = b.get_if<Symbol>();
        return s->cd == t->cd && s->name == t->name;
    }
    if (const auto* s = a.get_if<Variable>()) return s->name == b.get_if<Variable>()->name;
    if (const auto* s = a.get_if<Integer>()) return s->digits == b.get_if<Integer>()->digits;
    if (const auto* s = a.get_if<Float>()) {
        return std::bit_cast<std::uint64_t>(s->value) ==
               std::bit_cast<std::uint64_t>(b.get_if<Float>()->value);
    }
    if (const auto* s = a.get_if<Application>()) {
        const auto* t = b.get_if<Application>();
        if (s->args.size() != t->args.size()) return false;
        if (!structurally_equal(*s->head, *t->head)) return false;
        for (std::size_t i = 0; i < s->args.size(); ++i)
            if (!structurally_equal(*s->args[i], *t->args[i])) return false;
        return true;
    }
    const auto* s = a.get_if<SumBinder>();
    const auto* t = b.get_if<SumBinder>();
    return s->var == t->var && structurally_equal(*s->lower, *t->lower) &&
           structurally_equal(*s->upper, *t->upper) && structurally_equal(*s->body, *t->body);
}

const std::vector<std::string>& tensor1_symbols() {
    static const std::vector<std::string> names = {
        "tuple",          "tuple_selector", "Cartesian",     "unit_Cartesian",
        "Kronecker_tensor", "basis_selector", "tensor_selector", "contra_index",
        "covar_index",    "metric_tensor",  "Levi-Civita",
    };
    return names;
}

bool is_tensor1_name(std::string_view name) {
    if (name == kUnspecified) return true;
    const auto& names = tensor1_symbols();
    return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_arith1_name(std::string_view name) {
    static const std::array<const char*, 6> names = {"plus",   "times", "minus",
                                                     "divide", "power", "unary_minus"};
    return std::find_if(names.begin(), names.end(),
                        [&](const char* n) { return name == n; }) != names.end();
}

}  // namespace tensor1::om
