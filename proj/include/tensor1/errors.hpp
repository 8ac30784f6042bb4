#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "tensor1/span.hpp"

namespace tensor1 {

// Stable diagnostic/error codes. The names are part of the CLI contract:
// they appear verbatim in diagnostic lines and are documented in
// docs/diagnostics.md.
#define TENSOR1_ERRC_LIST(X)                                                 \
    /* parsing */                                                            \
    X(XmlSyntax)                                                             \
    X(UnsupportedElement)                                                    \
    X(BadName)                                                               \
    X(CompactSyntax)                                                         \
    X(AmbiguousName)                                                         \
    /* validation and evaluation */                                          \
    X(ArityMismatch)                                                         \
    X(IndexCountMismatch)                                                    \
    X(ImplicitEinstein)                                                      \
    X(CoordinateTupleNotVector)                                              \
    X(IndexExpected)                                                         \
    X(IndexNotNatural)                                                       \
    X(IndexOutOfRange)                                                       \
    X(UnsupportedSymbol)                                                     \
    X(UnboundVariable)                                                       \
    X(FrameRequired)                                                         \
    X(TypeMismatch)                                                          \
    X(UnknownFrame)                                                          \
    X(UnknownChart)                                                          \
    /* tensor algebra */                                                     \
    X(BadDimension)                                                          \
    X(SizeLimit)                                                             \
    X(DimMismatch)                                                           \
    X(FrameMismatch)                                                         \
    X(VarianceMismatch)                                                      \
    X(SignatureMismatch)                                                     \
    X(BadSlot)                                                               \
    X(UnspecifiedFrame)                                                      \
    X(PointMismatch)                                                         \
    X(SingularChart)                                                         \
    /* scalar evaluation */                                                  \
    X(DomainError)                                                           \
    /* files and configuration */                                            \
    X(IoError)                                                               \
    X(SchemaError)

enum class Errc {
#define TENSOR1_X(n) n,
    TENSOR1_ERRC_LIST(TENSOR1_X)
#undef TENSOR1_X
};

const char* errc_name(Errc c);

// Process exit-code contract: 0 ok, 1 semantic error, 2 parse error,
// 3 I/O failure, 4 config/schema error.
int errc_exit_code(Errc c);

class EngineError : public std::runtime_error {
public:
    EngineError(Errc code, const std::string& message,
                std::optional<SourceSpan> span = std::nullopt)
        : std::runtime_error(message), code_(code), span_(span) {}

    Errc code() const noexcept { return code_; }
    const std::optional<SourceSpan>& span() const noexcept { return span_; }

private:
    Errc code_;
    std::optional<SourceSpan> span_;
};

}  // namespace tensor1
