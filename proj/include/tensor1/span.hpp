#pragma once

#include <cstddef>

namespace tensor1 {

// Half-open byte range [begin, end) into the source text, plus the 1-based
// line/column of `begin`. Nodes built programmatically carry the default span.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 1;
    int column = 1;

    bool contains(const SourceSpan& other) const {
        return begin <= other.begin && other.end <= end;
    }
};

}  // namespace tensor1
