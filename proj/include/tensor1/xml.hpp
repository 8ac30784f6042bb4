#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tensor1/span.hpp"

namespace tensor1::xml {

struct Attr {
    std::string name;
    std::string value;
};

// Minimal XML element tree: enough for OpenMath objects and content
// dictionaries. Character data of all text nodes directly under an element
// is concatenated into `text`.
struct Element {
    std::string name;
    std::vector<Attr> attrs;
    std::vector<Element> children;
    std::string text;
    SourceSpan span;

    const std::string* attr(std::string_view attr_name) const;
};

// Parses a single document. Accepts an XML declaration, comments,
// processing instructions and a DOCTYPE without an internal subset.
// Throws EngineError(Errc::XmlSyntax) with a span on malformed input.
Element parse(std::string_view input);

std::string escape_text(std::string_view s);
std::string escape_attr(std::string_view s);

}  // namespace tensor1::xml
