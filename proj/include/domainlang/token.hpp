#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "domainlang/diagnostic.hpp"

namespace domainlang {

enum class TokenKind {
    Ident,    // identifiers and word keywords (val, if, else); backtick-quoted names
    Int,      // integer literal
    Decimal,  // decimal literal, e.g. 1.5
    String,   // string literal, raw text includes the quotes
    Symbol,   // punctuation and operators: ( ) [ ] , . : = => + /& || ...
    Error,    // unlexable input, kept so tokenization stays total
};

struct Token {
    TokenKind kind = TokenKind::Error;
    std::string text;  // raw lexeme; backticks and quotes preserved
    int line = 1;
    int col = 1;
    // identifier used as a word infix operator (set from the parse; affects
    // the space before a following parenthesis when joining)
    bool wordOp = false;

    bool isIdent(std::string_view name) const { return kind == TokenKind::Ident && text == name; }
    bool isSymbol(std::string_view sym) const { return kind == TokenKind::Symbol && text == sym; }

    // Identifier name with backticks stripped: `this` -> this.
    std::string identName() const;

    SourceSpan span() const {
        return SourceSpan{line, col, col + static_cast<int>(text.size())};
    }
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diagnostics;
};

// Lexes program text. Line comments (// ...) are skipped. Never throws;
// malformed input yields Error tokens plus Syntax diagnostics.
LexResult lex(std::string_view text);

// Total tokenizer used for dataset statistics: same tokens as lex(), errors folded in.
std::vector<Token> tokenizeProgram(std::string_view text);

// True for identifier and literal tokens; false for symbols (the punctuation
// convention used when counting program tokens).
bool isCountedToken(const Token& t);

// Joins tokens back into canonical one-space-per-separator text. Fragment
// boundaries (top-level `val`) are emitted one per line. A parenthesis is
// tight after a call-position identifier but spaced after keywords and
// word-operator tokens.
std::string joinTokens(const std::vector<Token>& tokens);

}  // namespace domainlang
