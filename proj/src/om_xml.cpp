#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include "tensor1/errors.hpp"
#include "tensor1/om_ast.hpp"
#include "tensor1/xml.hpp"

namespace tensor1::om {

namespace {

[[noreturn]] void unsupported(const xml::Element& el, const std::string& msg) {
    throw EngineError(Errc::UnsupportedElement, msg, el.span);
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

const std::string& required_attr(const xml::Element& el, const char* name) {
    const std::string* v = el.attr(name);
    if (!v)
        throw EngineError(Errc::XmlSyntax,
                          "<" + el.name + "> is missing the '" + name + "' attribute", el.span);
    return *v;
}

std::string checked_name(const xml::Element& el, const std::string& value) {
    if (!valid_name(value))
        throw EngineError(Errc::BadName, "invalid OpenMath name '" + value + "'", el.span);
    return value;
}

double parse_omf(const xml::Element& el) {
    if (const std::string* dec = el.attr("dec")) {
        std::string t = trimmed(*dec);
        if (t == "INF") return HUGE_VAL;
        if (t == "-INF") return -HUGE_VAL;
        if (t == "NaN" || t == "NAN") return std::nan("");
        double out = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
        if (ec != std::errc() || ptr != t.data() + t.size())
            throw EngineError(Errc::XmlSyntax, "invalid OMF dec value '" + t + "'", el.span);
        return out;
    }
    if (const std::string* hex = el.attr("hex")) {
        std::string t = trimmed(*hex);
        if (t.size() != 16)
            throw EngineError(Errc::XmlSyntax, "OMF hex value must be 16 hex digits", el.span);
        std::uint64_t bits = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), bits, 16);
        if (ec != std::errc() || ptr != t.data() + t.size())
            throw EngineError(Errc::XmlSyntax, "invalid OMF hex value '" + t + "'", el.span);
        double out;
        static_assert(sizeof(out) == sizeof(bits));
        std::memcpy(&out, &bits, sizeof(out));
        return out;
    }
    throw EngineError(Errc::XmlSyntax, "OMF requires a 'dec' or 'hex' attribute", el.span);
}

NodePtr convert(const xml::Element& el);

bool is_oms(const xml::Element& el, const char* cd, const char* name) {
    if (el.name != "OMS") return false;
    const std::string* c = el.attr("cd");
    const std::string* n = el.attr("name");
    return c && n && *c == cd && *n == name;
}

// OMA(arith1:sum, OMA(interval1:integer_interval, lo, hi),
//     OMBIND(fns1:lambda, OMBVAR(OMV), body))
NodePtr convert_sum(const xml::Element& oma) {
    const auto& kids = oma.children;
    auto shape_error = [&](const xml::Element& at) -> void {
        unsupported(at,
                    "arith1:sum is supported only as an explicit summation over an "
                    "integer interval with a single lambda-bound variable");
    };
    if (kids.size() != 3) shape_error(oma);
    const xml::Element& interval = kids[1];
    if (interval.name != "OMA" || interval.children.size() != 3 ||
        !is_oms(interval.children[0], kIntervalCd, "integer_interval"))
        shape_error(interval);
    const xml::Element& bind = kids[2];
    if (bind.name != "OMBIND" || bind.children.size() != 3 ||
        !is_oms(bind.children[0], kFnsCd, "lambda"))
        shape_error(bind);
    const xml::Element& bvar = bind.children[1];
    if (bvar.name != "OMBVAR" || bvar.children.size() != 1 || bvar.children[0].name != "OMV")
        shape_error(bvar);
    std::string bound = checked_name(bvar.children[0], required_attr(bvar.children[0], "name"));

    SumBinder s;
    s.var = std::move(bound);
    s.lower = convert(interval.children[1]);
    s.upper = convert(interval.children[2]);
    s.body = convert(bind.children[2]);
    return std::make_shared<OMNode>(OMNode{std::move(s), oma.span});
}

NodePtr convert(const xml::Element& el) {
    if (el.name == "OMS") {
        Symbol s{checked_name(el, required_attr(el, "cd")),
                 checked_name(el, required_attr(el, "name"))};
        return std::make_shared<OMNode>(OMNode{std::move(s), el.span});
    }
    if (el.name == "OMV") {
        Variable v{checked_name(el, required_attr(el, "name"))};
        return std::make_shared<OMNode>(OMNode{std::move(v), el.span});
    }
    if (el.name == "OMI") {
        std::string t = trimmed(el.text);
        std::string_view body = t;
        if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.remove_prefix(1);
        if (body.empty() ||
            !std::all_of(body.begin(), body.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw EngineError(Errc::XmlSyntax, "invalid OMI content '" + t + "'", el.span);
        NodePtr n = integer_digits(t);
        return std::make_shared<OMNode>(OMNode{n->node, el.span});
    }
    if (el.name == "OMF") {
        return std::make_shared<OMNode>(OMNode{Float{parse_omf(el)}, el.span});
    }
    if (el.name == "OMA") {
        if (el.children.size() < 2)
            unsupported(el, "OMA requires a head and at least one argument");
        const xml::Element& head_el = el.children[0];
        if (is_oms(head_el, kArithCd, "sum")) return convert_sum(el);
        if (head_el.name != "OMS" && head_el.name != "OMA")
            unsupported(head_el, "application head must be OMS or OMA");
        Application app;
        app.head = convert(head_el);
        for (std::size_t i = 1; i < el.children.size(); ++i)
            app.args.push_back(convert(el.children[i]));
        return std::make_shared<OMNode>(OMNode{std::move(app), el.span});
    }
    unsupported(el, "unsupported element <" + el.name + ">");
}

}  // namespace

NodePtr parse_xml(std::string_view input) {
    xml::Element root = xml::parse(input);
    if (root.name != "OMOBJ")
        throw EngineError(Errc::UnsupportedElement, "root element must be OMOBJ, got <" + root.name + ">",
                          root.span);
    if (root.children.size() != 1)
        throw EngineError(Errc::XmlSyntax, "OMOBJ must contain exactly one object", root.span);
    return convert(root.children[0]);
}

namespace {

// Shortest round-trip decimal; always contains '.' or an exponent so the
// value reads back as a float.
std::string format_dec(double v) {
    if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string out(buf, ptr);
    if (out.find('.') == std::string::npos && out.find('e') == std::string::npos) out += ".0";
    return out;
}

void write(const OMNode& n, std::string& out, int depth) {
    std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    if (const auto* s = n.get_if<Symbol>()) {
        out += pad + "<OMS cd=\"" + xml::escape_attr(s->cd) + "\" name=\"" +
               xml::escape_attr(s->name) + "\"/>\n";
    } else if (const auto* v = n.get_if<Variable>()) {
        out += pad + "<OMV name=\"" + xml::escape_attr(v->name) + "\"/>\n";
    } else if (const auto* i = n.get_if<Integer>()) {
        out += pad + "<OMI>" + i->digits + "</OMI>\n";
    } else if (const auto* f = n.get_if<Float>()) {
        if (std::isnan(f->value)) {
            // hex keeps the exact bit pattern; "NaN" would lose the payload
            std::uint64_t bits;
            std::memcpy(&bits, &f->value, sizeof(bits));
            char hex[17];
            std::snprintf(hex, sizeof(hex), "%016llX", static_cast<unsigned long long>(bits));
            out += pad + "<OMF hex=\"" + std::string(hex) + "\"/>\n";
        } else {
            out += pad + "<OMF dec=\"" + format_dec(f->value) + "\"/>\n";
        }
    } else if (const auto* a = n.get_if<Application>()) {
        out += pad + "<OMA>\n";
        write(*a->head, out, depth + 1);
        for (const auto& arg : a->args) write(*arg, out, depth + 1);
        out += pad + "</OMA>\n";
    } else if (const auto* s2 = n.get_if<SumBinder>()) {
        std::string pad1(2 * static_cast<std::size_t>(depth + 1), ' ');
        std::string pad2(2 * static_cast<std::size_t>(depth + 2), ' ');
        out += pad + "<OMA>\n";
        out += pad1 + "<OMS cd=\"arith1\" name=\"sum\"/>\n";
        out += pad1 + "<OMA>\n";
        out += pad2 + "<OMS cd=\"interval1\" name=\"integer_interval\"/>\n";
        write(*s2->lower, out, depth + 2);
        write(*s2->upper, out, depth + 2);
        out += pad1 + "</OMA>\n";
        out += pad1 + "<OMBIND>\n";
        out += pad2 + "<OMS cd=\"fns1\" name=\"lambda\"/>\n";
        out += pad2 + "<OMBVAR>\n";
        out += pad2 + "  <OMV name=\"" + xml::escape_attr(s2->var) + "\"/>\n";
        out += pad2 + "</OMBVAR>\n";
        write(*s2->body, out, depth + 2);
        out += pad1 + "</OMBIND>\n";
        out += pad + "</OMA>\n";
    }
}

}  // namespace

std::string serialize_xml(const OMNode& node) {
    std::string out = "<OMOBJ>\n";
    write(node, out, 1);
    out += "</OMOBJ>\n";
    return out;
}

}  // namespace tensor1::om
