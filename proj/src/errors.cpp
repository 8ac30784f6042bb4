#include "tensor1/errors.hpp"

namespace tensor1 {

const char* errc_name(Errc c) {
    switch (c) {
#define TENSOR1_X(n) \
    case Errc::n:    \
        return #n;
        TENSOR1_ERRC_LIST(TENSOR1_X)
#undef TENSOR1_X
    }
    return "Unknown";
}

int errc_exit_code(Errc c) {
    switch (c) {
        case Errc::XmlSyntax:
        case Errc::UnsupportedElement:
        case Errc::BadName:
        case Errc::CompactSyntax:
        case Errc::AmbiguousName:
            return 2;
        case Errc::IoError:
            return 3;
        case Errc::SchemaError:
            return 4;
        default:
            return 1;
    }
}

}  // namespace tensor1
