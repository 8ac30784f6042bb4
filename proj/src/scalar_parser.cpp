#include <cctype>
#include <charconv>
#include <string>

#include "tensor1/autodiff.hpp"
#include "tensor1/errors.hpp"

// Scalar expression grammar (docs/compact-grammar.md):
//   expr    = term { ("+" | "-") term } ;
//   term    = factor { ("*" | "/") factor } ;
//   factor  = "-" factor | power ;
//   power   = primary [ "^" [ "-" ] integer ] ;
//   primary = number | variable | function "(" expr { "," expr } ")" | "(" expr ")" ;
// Variables are x1..x<arity>; only integer exponents are allowed, general
// powers are written exp(b*ln(a)).

namespace tensor1::ad {

namespace {

struct FunctionInfo {
    const char* name;
    Op op;
    int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Op::Sin, 1},  {"cos", Op::Cos, 1},   {"tan", Op::Tan, 1},
    {"exp", Op::Exp, 1},  {"ln", Op::Ln, 1},     {"sqrt", Op::Sqrt, 1},
    {"atan2", Op::Atan2, 2},
};

class ScalarParser {
public:
    ScalarParser(std::string_view s, int arity) : s_(s), arity_(arity) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip_ws();
        if (!eof()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view s_;
    int arity_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char advance() { return s_[pos_++]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    SourceSpan here() const {
        return SourceSpan{pos_, pos_, 1, static_cast<int>(pos_) + 1};
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw EngineError(Errc::CompactSyntax, "scalar expression: " + msg, here());
    }

    ExprPtr with_span(ExprPtr e, std::size_t begin) {
        auto copy = std::make_shared<ScalarExpr>(*e);
        copy->span = SourceSpan{begin, pos_, 1, static_cast<int>(begin) + 1};
        return copy;
    }

    ExprPtr expr() {
        std::size_t begin = pos_;
        ExprPtr left = term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                advance();
                ExprPtr right = term();
                left = with_span(c == '+' ? add(left, right) : sub(left, right), begin);
            } else {
                return left;
            }
        }
    }

    ExprPtr term() {
        std::size_t begin = pos_;
        ExprPtr left = factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '*' || c == '/') {
                advance();
                ExprPtr right = factor();
                left = with_span(c == '*' ? mul(left, right) : div(left, right), begin);
            } else {
                return left;
            }
        }
    }

    ExprPtr factor() {
        skip_ws();
        std::size_t begin = pos_;
        if (peek() == '-') {
            advance();
            return with_span(neg(factor()), begin);
        }
        return power();
    }

    ExprPtr power() {
        std::size_t begin = pos_;
        ExprPtr base = primary();
        skip_ws();
        if (peek() != '^') return base;
        advance();
        skip_ws();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            advance();
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("exponent must be an integer literal (use exp(b*ln(a)) for general powers)");
        int exponent = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            exponent = exponent * 10 + (advance() - '0');
            if (exponent > 1000) fail("exponent too large");
        }
        if (peek() == '.') fail("exponent must be an integer literal");
        return with_span(pow_int(base, negative ? -exponent : exponent), begin);
    }

    ExprPtr primary() {
        skip_ws();
        std::size_t begin = pos_;
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            advance();
            ExprPtr e = expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            advance();
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                name.push_back(advance());
            skip_ws();
            if (peek() == '(') return call(name, begin);
            return variable_ref(name, begin);
        }
        fail("expected a number, variable or function call");
    }

    ExprPtr number() {
        std::size_t begin = pos_;
        std::string text;
        while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        if (peek() == '.') {
            text.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        }
        if (peek() == 'e' || peek() == 'E') {
            text.push_back(advance());
            if (peek() == '+' || peek() == '-') text.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        }
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            fail("invalid number '" + text + "'");
        return with_span(constant(v), begin);
    }

    ExprPtr variable_ref(const std::string& name, std::size_t begin) {
        if (name.size() >= 2 && name[0] == 'x') {
            int slot = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), slot);
            if (ec == std::errc() && ptr == name.data() + name.size()) {
                if (slot < 1 || slot > arity_)
                    fail("variable '" + name + "' out of range (chart has " +
                         std::to_string(arity_) + " coordinates)");
                return with_span(variable(slot - 1), begin);
            }
        }
        fail("unknown name '" + name + "' (variables are x1..x" + std::to_string(arity_) + ")");
    }

    ExprPtr call(const std::string& name, std::size_t begin) {
        for (const FunctionInfo& f : kFunctions) {
            if (name == f.name) {
                advance();  // '('
                ExprPtr first = expr();
                skip_ws();
                if (f.arity == 2) {
                    if (peek() != ',') fail("'" + name + "' takes two arguments");
                    advance();
                    ExprPtr second = expr();
                    skip_ws();
                    if (peek() != ')') fail("expected ')'");
                    advance();
                    return with_span(apply_atan2(first, second), begin);
                }
                if (peek() == ',') fail("'" + name + "' takes one argument");
                if (peek() != ')') fail("expected ')'");
                advance();
                return with_span(apply_unary(f.op, first), begin);
            }
        }
        fail("unknown function '" + name + "'");
    }
};

const char* op_token(Op op) {
    switch (op) {
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Tan: return "tan";
        case Op::Exp: return "exp";
        case Op::Ln: return "ln";
        case Op::Sqrt: return "sqrt";
        default: return "?";
    }
}

}  // namespace

ExprPtr parse_scalar(std::string_view text, int arity) {
    return ScalarParser(text, arity).parse();
}

std::string to_string(const ScalarExpr& e) {
    switch (e.op) {
        case Op::Const: {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.value);
            return std::string(buf, ptr);
        }
        case Op::Var: return "x" + std::to_string(e.slot + 1);
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            return "(" + to_string(*e.a) + " " + op_token(e.op) + " " + to_string(*e.b) + ")";
        case Op::Neg: return "-" + to_string(*e.a);
        case Op::Pow: return "(" + to_string(*e.a) + ")^" + std::to_string(e.exponent);
        case Op::Atan2: return "atan2(" + to_string(*e.a) + ", " + to_string(*e.b) + ")";
        default:
            return std::string(op_token(e.op)) + "(" + to_string(*e.a) + ")";
    }
}

}  // namespace tensor1::ad
