#include "domainlang/token.hpp"

#include <cctype>

namespace domainlang {

const char* diagKindName(DiagKind k) {
    switch (k) {
        case DiagKind::Syntax: return "Syntax";
        case DiagKind::UnknownFunction: return "UnknownFunction";
        case DiagKind::UnknownType: return "UnknownType";
        case DiagKind::TypeMismatch: return "TypeMismatch";
        case DiagKind::UnboundVariable: return "UnboundVariable";
        case DiagKind::ArityMismatch: return "ArityMismatch";
    }
    return "?";
}

std::string Diagnostic::format() const {
    std::string out;
    out += std::to_string(where.line);
    out += ':';
    out += std::to_string(where.colBegin);
    out += ": ";
    out += diagKindName(kind);
    out += ": ";
    out += message;
    return out;
}

std::string formatDiagnostics(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        out += d.format();
        out += '\n';
    }
    return out;
}

std::string Token::identName() const {
    if (text.size() >= 2 && text.front() == '`' && text.back() == '`') {
        return text.substr(1, text.size() - 2);
    }
    return text;
}

namespace {

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentCont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool isOpChar(char c) {
    switch (c) {
        case '+': case '-': case '*': case '/': case '&': case '|':
        case '<': case '>': case '=': case '!': case '%': case '^': case '~':
            return true;
        default:
            return false;
    }
}

}  // namespace

LexResult lex(std::string_view text) {
    LexResult res;
    int line = 1;
    int col = 1;
    size_t i = 0;
    const size_t n = text.size();

    auto push = [&](TokenKind kind, std::string lexeme, int tline, int tcol) {
        res.tokens.push_back(Token{kind, std::move(lexeme), tline, tcol});
    };

    while (i < n) {
        char c = text[i];
        if (c == '\n') {
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        // line comment
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            while (i < n && text[i] != '\n') { ++i; ++col; }
            continue;
        }
        int tline = line, tcol = col;
        if (isIdentStart(c)) {
            size_t j = i;
            while (j < n && isIdentCont(text[j])) ++j;
            push(TokenKind::Ident, std::string(text.substr(i, j - i)), tline, tcol);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (c == '`') {
            size_t j = i + 1;
            while (j < n && text[j] != '`' && text[j] != '\n') ++j;
            if (j >= n || text[j] != '`') {
                std::string lexeme(text.substr(i, j - i));
                push(TokenKind::Error, lexeme, tline, tcol);
                res.diagnostics.push_back(Diagnostic{DiagKind::Syntax,
                    SourceSpan{tline, tcol, tcol + static_cast<int>(lexeme.size())},
                    "unterminated backtick identifier"});
                col += static_cast<int>(j - i);
                i = j;
                continue;
            }
            ++j;  // closing backtick
            push(TokenKind::Ident, std::string(text.substr(i, j - i)), tline, tcol);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            bool decimal = false;
            if (j + 1 < n && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                decimal = true;
                ++j;
                while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            push(decimal ? TokenKind::Decimal : TokenKind::Int,
                 std::string(text.substr(i, j - i)), tline, tcol);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (c == '"') {
            size_t j = i + 1;
            bool closed = false;
            while (j < n) {
                if (text[j] == '\\' && j + 1 < n) { j += 2; continue; }
                if (text[j] == '"') { closed = true; ++j; break; }
                if (text[j] == '\n') break;
                ++j;
            }
            std::string lexeme(text.substr(i, j - i));
            if (!closed) {
                push(TokenKind::Error, lexeme, tline, tcol);
                res.diagnostics.push_back(Diagnostic{DiagKind::Syntax,
                    SourceSpan{tline, tcol, tcol + static_cast<int>(lexeme.size())},
                    "unterminated string literal"});
            } else {
                push(TokenKind::String, lexeme, tline, tcol);
            }
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        switch (c) {
            case '(': case ')': case '[': case ']': case '{': case '}':
            case ',': case '.': case ':':
                push(TokenKind::Symbol, std::string(1, c), tline, tcol);
                ++i;
                ++col;
                continue;
            default:
                break;
        }
        if (isOpChar(c)) {
            size_t j = i;
            while (j < n && isOpChar(text[j])) ++j;
            push(TokenKind::Symbol, std::string(text.substr(i, j - i)), tline, tcol);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        push(TokenKind::Error, std::string(1, c), tline, tcol);
        res.diagnostics.push_back(Diagnostic{DiagKind::Syntax,
            SourceSpan{tline, tcol, tcol + 1},
            std::string("unexpected character '") + c + "'"});
        ++i;
        ++col;
    }
    return res;
}

std::vector<Token> tokenizeProgram(std::string_view text) {
    return lex(text).tokens;
}

bool isCountedToken(const Token& t) {
    switch (t.kind) {
        case TokenKind::Ident:
        case TokenKind::Int:
        case TokenKind::Decimal:
        case TokenKind::String:
            return true;
        default:
            return false;
    }
}

std::string joinTokens(const std::vector<Token>& tokens) {
    std::string out;
    int depth = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.isSymbol("(") || t.isSymbol("[")) ++depth;
        if (t.isSymbol(")") || t.isSymbol("]")) --depth;

        if (i == 0) {
            out += t.text;
            continue;
        }
        const Token& p = tokens[i - 1];
        // new fragment starts on its own line
        if (depth == 0 && t.isIdent("val")) {
            out += '\n';
            out += t.text;
            continue;
        }
        bool tight = false;
        if (t.isSymbol(")") || t.isSymbol("]") || t.isSymbol(",") || t.isSymbol(".")) tight = true;
        if (p.isSymbol("(") || p.isSymbol("[") || p.isSymbol(".")) tight = true;
        if (t.isSymbol("(") || t.isSymbol("[")) {
            // call/type application binds to the preceding value token;
            // keywords and word operators keep their space
            bool keyword = p.isIdent("if") || p.isIdent("else") || p.isIdent("val");
            if (!keyword && !p.wordOp &&
                (p.kind == TokenKind::Ident || p.isSymbol(")") || p.isSymbol("]")))
                tight = true;
        }
        if (t.isSymbol(":")) tight = true;  // ascription colon hugs the name
        out += tight ? "" : " ";
        out += t.text;
    }
    return out;
}

}  // namespace domainlang
