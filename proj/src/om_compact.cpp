#include <cctype>
#include <charconv>
#include <string>

#include "tensor1/errors.hpp"
#include "tensor1/om_ast.hpp"

// Compact grammar (full EBNF in docs/compact-grammar.md):
//   object      = expr ;
//   expr        = sum | application | qualified | number | identifier ;
//   sum         = "sum" "(" identifier "=" expr ".." expr "," expr ")" ;
//   application = symbol-ref "(" expr { "," expr } ")" ;
//   symbol-ref  = qualified | identifier ;
//   qualified   = identifier ":" identifier ;
// Unqualified application heads resolve to tensor1, then arith1; unknown
// heads are an AmbiguousName error. A bare identifier is a variable unless
// it names a tensor1 symbol.

namespace tensor1::om {

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class CompactParser {
public:
    explicit CompactParser(std::string_view s) : s_(s) {}

    NodePtr object() {
        skip_ws();
        NodePtr n = expr();
        skip_ws();
        if (!eof()) fail("unexpected trailing input");
        return n;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char peek(std::size_t ahead) const {
        return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    SourceSpan here() const { return SourceSpan{pos_, pos_, line_, col_}; }

    SourceSpan span_from(const SourceSpan& start) const {
        return SourceSpan{start.begin, pos_, start.line, start.column};
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw EngineError(Errc::CompactSyntax, msg, here());
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string identifier() {
        if (!ident_start(peek())) fail("expected an identifier");
        std::string out;
        while (!eof() && ident_char(peek())) out.push_back(advance());
        return out;
    }

    // Number literal. The '.' of a ".." range separator is never consumed.
    NodePtr number() {
        SourceSpan start = here();
        std::string text;
        if (peek() == '-') text.push_back(advance());
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a digit");
        while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        bool is_float = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_float = true;
            text.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        }
        if (peek() == 'e' || peek() == 'E') {
            is_float = true;
            text.push_back(advance());
            if (peek() == '+' || peek() == '-') text.push_back(advance());
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent digit");
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        }
        NodePtr n;
        if (is_float) {
            double v = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size())
                throw EngineError(Errc::CompactSyntax, "invalid number '" + text + "'", span_from(start));
            n = floating(v);
        } else {
            n = integer_digits(text);
        }
        return std::make_shared<OMNode>(OMNode{n->node, span_from(start)});
    }

    NodePtr expr() {
        skip_ws();
        if (eof()) fail("unexpected end of input");
        char c = peek();
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return number();
        if (!ident_start(c)) fail("expected an expression");

        SourceSpan start = here();
        std::string first = identifier();

        // qualified symbol: cd:name
        std::string cd, name;
        bool qualified = false;
        if (peek() == ':') {
            advance();
            cd = first;
            name = identifier();
            qualified = true;
            if (!valid_name(cd) || !valid_name(name))
                throw EngineError(Errc::BadName, "invalid symbol name '" + cd + ":" + name + "'",
                                  span_from(start));
        }

        skip_ws();
        if (peek() != '(') {
            if (qualified)
                return std::make_shared<OMNode>(OMNode{Symbol{cd, name}, span_from(start)});
            if (is_tensor1_name(first))
                return std::make_shared<OMNode>(OMNode{Symbol{kTensorCd, first}, span_from(start)});
            return std::make_shared<OMNode>(OMNode{Variable{first}, span_from(start)});
        }

        if (!qualified && first == "sum") return sum_form(start);

        if (!qualified) {
            if (is_tensor1_name(first)) {
                cd = kTensorCd;
            } else if (is_arith1_name(first)) {
                cd = kArithCd;
            } else {
                throw EngineError(Errc::AmbiguousName,
                                  "unknown symbol '" + first +
                                      "' (not in tensor1 or arith1; qualify it as cd:name)",
                                  span_from(start));
            }
            name = first;
        }

        advance();  // '('
        Application app;
        app.head = std::make_shared<OMNode>(OMNode{Symbol{cd, name}, span_from(start)});
        for (;;) {
            app.args.push_back(expr());
            skip_ws();
            if (peek() == ',') {
                advance();
                continue;
            }
            break;
        }
        expect(')');
        return std::make_shared<OMNode>(OMNode{std::move(app), span_from(start)});
    }

    // sum(i=lo..hi, body)
    NodePtr sum_form(const SourceSpan& start) {
        expect('(');
        skip_ws();
        std::string bound = identifier();
        skip_ws();
        expect('=');
        NodePtr lower = expr();
        skip_ws();
        if (!(peek() == '.' && peek(1) == '.')) fail("expected '..' in summation range");
        advance();
        advance();
        NodePtr upper = expr();
        skip_ws();
        expect(',');
        NodePtr body = expr();
        skip_ws();
        expect(')');
        SumBinder s{std::move(bound), std::move(lower), std::move(upper), std::move(body)};
        return std::make_shared<OMNode>(OMNode{std::move(s), span_from(start)});
    }
};

}  // namespace

NodePtr parse_compact(std::string_view input) { return CompactParser(input).object(); }

}  // namespace tensor1::om
