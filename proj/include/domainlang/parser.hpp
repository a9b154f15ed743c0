#pragma once

#include <string>
#include <variant>

#include "domainlang/ast.hpp"
#include "domainlang/token.hpp"

namespace domainlang {

struct ParseResult {
    bool ok = false;
    Program program;
    std::vector<Token> tokens;          // full token stream (valid even on failure)
    std::vector<Diagnostic> diagnostics;
    // Token ranges [begin, end) occupied by type expressions; ident tokens in
    // these ranges are type names, not value identifiers.
    std::vector<std::pair<int, int>> typeTokenRanges;
};

// Parses a whole program (sequence of `val` bindings). Any string is accepted;
// failures produce Syntax diagnostics and no partial program.
ParseResult parseProgram(const std::string& text);

// Parses a type expression from token range [pos, end); advances pos.
// Used by both the program parser and the signature loader.
bool parseTypeExprTokens(const std::vector<Token>& toks, size_t& pos, TypeExpr& out,
                         std::vector<Diagnostic>& diags);

// Sets the wordOp flag on identifier tokens used as infix operators.
void markWordOperators(const Program& program, std::vector<Token>& tokens);

// Renders a program back to source text with minimal parenthesization.
// parseProgram(printProgram(p)) is structurally equal to p.
std::string printProgram(const Program& p);
std::string printExpr(const Expr& e);

}  // namespace domainlang
