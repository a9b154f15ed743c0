#pragma once

#include <string>
#include <vector>

namespace domainlang {

enum class DiagKind {
    Syntax,
    UnknownFunction,
    UnknownType,
    TypeMismatch,
    UnboundVariable,
    ArityMismatch,
};

const char* diagKindName(DiagKind k);

// 1-based line/column; colEnd is one past the last column of the offending text.
struct SourceSpan {
    int line = 1;
    int colBegin = 1;
    int colEnd = 1;
};

struct Diagnostic {
    DiagKind kind = DiagKind::Syntax;
    SourceSpan where;
    std::string message;

    std::string format() const;
};

std::string formatDiagnostics(const std::vector<Diagnostic>& diags);

}  // namespace domainlang
