#include "tensor1/xml.hpp"

#include <cctype>
#include <cstdlib>

#include "tensor1/errors.hpp"

namespace tensor1::xml {

const std::string* Element::attr(std::string_view attr_name) const {
    for (const auto& a : attrs)
        if (a.name == attr_name) return &a.value;
    return nullptr;
}

namespace {

bool name_start_char(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool name_char(char c) {
    return name_start_char(c) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '-' || c == '.';
}

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char peek(std::size_t ahead) const {
        return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
    }
    std::size_t pos() const { return pos_; }
    int line() const { return line_; }
    int column() const { return col_; }

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

    bool starts_with(std::string_view prefix) const {
        return s_.compare(pos_, prefix.size(), prefix) == 0;
    }

    void skip(std::size_t n) {
        while (n-- && !eof()) advance();
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    SourceSpan here() const { return SourceSpan{pos_, pos_, line_, col_}; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw EngineError(Errc::XmlSyntax, msg, here());
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view s) : c_(s) {}

    Element document() {
        skip_misc(true);
        if (c_.eof() || c_.peek() != '<')
            c_.fail("expected a root element");
        Element root = element();
        skip_misc(false);
        if (!c_.eof()) c_.fail("content after the root element");
        return root;
    }

private:
    Cursor c_;

    // Prolog / trailing misc: whitespace, comments, PIs, one optional DOCTYPE.
    void skip_misc(bool allow_doctype) {
        for (;;) {
            c_.skip_ws();
            if (c_.starts_with("<?")) {
                skip_until("?>");
            } else if (c_.starts_with("<!--")) {
                skip_until("-->");
            } else if (allow_doctype && c_.starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_until(std::string_view terminator) {
        while (!c_.eof() && !c_.starts_with(terminator)) c_.advance();
        if (c_.eof()) c_.fail("unterminated '" + std::string(terminator.substr(0, 2)) + "' section");
        c_.skip(terminator.size());
    }

    void skip_doctype() {
        while (!c_.eof() && c_.peek() != '>') {
            if (c_.peek() == '[') c_.fail("DOCTYPE internal subset is not supported");
            c_.advance();
        }
        if (c_.eof()) c_.fail("unterminated DOCTYPE");
        c_.advance();
    }

    std::string name() {
        if (c_.eof() || !name_start_char(c_.peek())) c_.fail("expected a name");
        std::string out;
        while (!c_.eof() && name_char(c_.peek())) out.push_back(c_.advance());
        return out;
    }

    std::string reference() {
        // cursor sits on '&'
        SourceSpan start = c_.here();
        c_.advance();
        std::string ent;
        while (!c_.eof() && c_.peek() != ';') {
            ent.push_back(c_.advance());
            if (ent.size() > 10) break;
        }
        if (c_.eof() || c_.peek() != ';')
            throw EngineError(Errc::XmlSyntax, "unterminated entity reference", start);
        c_.advance();
        if (ent == "lt") return "<";
        if (ent == "gt") return ">";
        if (ent == "amp") return "&";
        if (ent == "apos") return "'";
        if (ent == "quot") return "\"";
        if (!ent.empty() && ent[0] == '#') {
            int base = 10;
            std::string digits = ent.substr(1);
            if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
                base = 16;
                digits = digits.substr(1);
            }
            char* endp = nullptr;
            long code = std::strtol(digits.c_str(), &endp, base);
            if (digits.empty() || *endp != '\0' || code <= 0 || code > 0x10FFFF)
                throw EngineError(Errc::XmlSyntax, "invalid character reference '&" + ent + ";'", start);
            return utf8(static_cast<unsigned>(code));
        }
        throw EngineError(Errc::XmlSyntax, "unknown entity '&" + ent + ";'", start);
    }

    static std::string utf8(unsigned cp) {
        std::string out;
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
        return out;
    }

    std::string attr_value() {
        char quote = c_.peek();
        if (quote != '"' && quote != '\'') c_.fail("expected a quoted attribute value");
        c_.advance();
        std::string out;
        while (!c_.eof() && c_.peek() != quote) {
            if (c_.peek() == '<') c_.fail("'<' in attribute value");
            if (c_.peek() == '&')
                out += reference();
            else
                out.push_back(c_.advance());
        }
        if (c_.eof()) c_.fail("unterminated attribute value");
        c_.advance();
        return out;
    }

    Element element() {
        SourceSpan open = c_.here();
        c_.advance();  // '<'
        Element el;
        el.name = name();
        for (;;) {
            c_.skip_ws();
            if (c_.eof()) c_.fail("unterminated start tag");
            char ch = c_.peek();
            if (ch == '>') {
                c_.advance();
                content(el);
                break;
            }
            if (ch == '/') {
                c_.advance();
                if (c_.peek() != '>') c_.fail("expected '>' after '/'");
                c_.advance();
                break;
            }
            Attr a;
            a.name = name();
            for (const auto& prev : el.attrs)
                if (prev.name == a.name)
                    throw EngineError(Errc::XmlSyntax, "duplicate attribute '" + a.name + "'", c_.here());
            c_.skip_ws();
            if (c_.peek() != '=') c_.fail("expected '=' after attribute name");
            c_.advance();
            c_.skip_ws();
            a.value = attr_value();
            el.attrs.push_back(std::move(a));
        }
        el.span = SourceSpan{open.begin, c_.pos(), open.line, open.column};
        return el;
    }

    void content(Element& el) {
        for (;;) {
            if (c_.eof()) c_.fail("missing end tag for <" + el.name + ">");
            if (c_.starts_with("<!--")) {
                skip_until("-->");
            } else if (c_.starts_with("<![CDATA[")) {
                c_.skip(9);
                while (!c_.eof() && !c_.starts_with("]]>")) el.text.push_back(c_.advance());
                if (c_.eof()) c_.fail("unterminated CDATA section");
                c_.skip(3);
            } else if (c_.starts_with("</")) {
                SourceSpan close = c_.here();
                c_.skip(2);
                std::string closing = name();
                if (closing != el.name)
                    throw EngineError(Errc::XmlSyntax,
                                      "mismatched end tag </" + closing + ">, expected </" + el.name + ">",
                                      close);
                c_.skip_ws();
                if (c_.peek() != '>') c_.fail("expected '>' in end tag");
                c_.advance();
                return;
            } else if (c_.starts_with("<?")) {
                skip_until("?>");
            } else if (c_.peek() == '<') {
                el.children.push_back(element());
            } else if (c_.peek() == '&') {
                el.text += reference();
            } else {
                el.text.push_back(c_.advance());
            }
        }
    }
};

}  // namespace

Element parse(std::string_view input) { return Parser(input).document(); }

std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string escape_attr(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace tensor1::xml
