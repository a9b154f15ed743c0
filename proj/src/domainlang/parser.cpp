#include "domainlang/parser.hpp"

#include <cctype>

namespace domainlang {

namespace {

bool isKeyword(const std::string& s) { return s == "val" || s == "if" || s == "else"; }

// Scala-style operator precedence by first character; word operators lowest.
int infixPrecedence(const std::string& op) {
    char c = op[0];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '`') return 1;
    switch (c) {
        case '|': return 2;
        case '^': return 3;
        case '&': return 4;
        case '=': case '!': return 5;
        case '<': case '>': return 6;
        case ':': return 7;
        case '+': case '-': return 8;
        case '*': case '/': case '%': return 9;
        default: return 10;
    }
}

std::string decodeString(const std::string& raw) {
    // raw includes the surrounding quotes
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\\' && i + 2 < raw.size()) {
            char e = raw[i + 1];
            switch (e) {
                case 'n': out += '\n'; ++i; continue;
                case 't': out += '\t'; ++i; continue;
                case 'r': out += '\r'; ++i; continue;
                case '\\': out += '\\'; ++i; continue;
                case '"': out += '"'; ++i; continue;
                default: out += c; continue;
            }
        }
        out += c;
    }
    return out;
}

struct Parser {
    const std::vector<Token>& toks;
    std::vector<Diagnostic>& diags;
    std::vector<std::pair<int, int>>& typeRanges;
    size_t pos = 0;
    bool failed = false;

    const Token* cur() const { return pos < toks.size() ? &toks[pos] : nullptr; }
    const Token* peek(size_t k) const { return pos + k < toks.size() ? &toks[pos + k] : nullptr; }

    SourceSpan hereSpan() const {
        if (const Token* t = cur()) return t->span();
        if (!toks.empty()) {
            SourceSpan s = toks.back().span();
            s.colBegin = s.colEnd;
            return s;
        }
        return SourceSpan{};
    }

    void error(const std::string& msg) {
        if (failed) return;  // keep the first offending location
        failed = true;
        diags.push_back(Diagnostic{DiagKind::Syntax, hereSpan(), msg});
    }

    bool atSymbol(std::string_view s) const {
        const Token* t = cur();
        return t && t->isSymbol(s);
    }
    bool atIdent(std::string_view s) const {
        const Token* t = cur();
        return t && t->isIdent(s);
    }

    bool expectSymbol(std::string_view s) {
        if (atSymbol(s)) { ++pos; return true; }
        error(std::string("expected '") + std::string(s) + "'");
        return false;
    }

    bool isInfixOpToken(const Token& t) const {
        if (t.kind == TokenKind::Ident) return !isKeyword(t.text);
        if (t.kind != TokenKind::Symbol) return false;
        const std::string& s = t.text;
        if (s == "=" || s == "=>" || s == ":" || s == "," || s == "." ||
            s == "(" || s == ")" || s == "[" || s == "]")
            return false;
        return true;
    }

    // ---- type expressions ----

    bool parseTypeExpr(TypeExpr& out) {
        std::vector<TypeExpr> items;
        const Token* t = cur();
        if (!t) { error("expected type"); return false; }
        if (t->isSymbol("(")) {
            ++pos;
            if (!atSymbol(")")) {
                TypeExpr first;
                if (!parseTypeExpr(first)) return false;
                items.push_back(std::move(first));
                while (atSymbol(",")) {
                    ++pos;
                    TypeExpr next;
                    if (!parseTypeExpr(next)) return false;
                    items.push_back(std::move(next));
                }
            }
            if (!expectSymbol(")")) return false;
        } else if (t->kind == TokenKind::Ident && !isKeyword(t->text)) {
            std::string name = t->identName();
            ++pos;
            std::vector<TypeExpr> targs;
            if (atSymbol("[")) {
                ++pos;
                TypeExpr a;
                if (!parseTypeExpr(a)) return false;
                targs.push_back(std::move(a));
                while (atSymbol(",")) {
                    ++pos;
                    TypeExpr b;
                    if (!parseTypeExpr(b)) return false;
                    targs.push_back(std::move(b));
                }
                if (!expectSymbol("]")) return false;
            }
            items.push_back(TypeExpr::named(std::move(name), std::move(targs)));
        } else {
            error("expected type");
            return false;
        }

        if (atSymbol("=>")) {
            ++pos;
            TypeExpr result;
            if (!parseTypeExpr(result)) return false;
            out = TypeExpr::func(std::move(items), std::move(result));
            return true;
        }
        if (items.size() != 1) {
            error("expected '=>' after parenthesized parameter types");
            return false;
        }
        out = std::move(items[0]);
        return true;
    }

    // Parses a type and records its token range for the normalizer.
    bool parseTypeExprRecorded(TypeExpr& out) {
        int begin = static_cast<int>(pos);
        if (!parseTypeExpr(out)) return false;
        typeRanges.emplace_back(begin, static_cast<int>(pos));
        return true;
    }

    // ---- expressions ----

    ExprPtr makeNode(Expr::Kind k, SourceSpan sp) {
        auto e = std::make_unique<Expr>();
        e->kind = k;
        e->span = sp;
        return e;
    }

    ExprPtr parseExpr() { return parseInfix(0); }

    ExprPtr parseInfix(int minPrec) {
        ExprPtr left = parsePostfix();
        if (!left) return nullptr;
        while (const Token* t = cur()) {
            if (!isInfixOpToken(*t)) break;
            int prec = infixPrecedence(t->text);
            if (prec < minPrec) break;
            std::string op = t->identName();
            int opTok = static_cast<int>(pos);
            SourceSpan sp = t->span();
            ++pos;
            ExprPtr right = parseInfix(prec + 1);
            if (!right) return nullptr;
            ExprPtr node = makeNode(Expr::Kind::Infix, sp);
            node->name = std::move(op);
            node->nameTokenIndex = opTok;
            node->a = std::move(left);
            node->b = std::move(right);
            left = std::move(node);
        }
        return left;
    }

    ExprPtr parsePostfix() {
        ExprPtr e = parsePrimary();
        if (!e) return nullptr;
        while (const Token* t = cur()) {
            if (t->isSymbol(".")) {
                ++pos;
                const Token* nm = cur();
                if (!nm || nm->kind != TokenKind::Ident) {
                    error("expected member name after '.'");
                    return nullptr;
                }
                std::string member = nm->identName();
                int nmTok = static_cast<int>(pos);
                SourceSpan sp = nm->span();
                ++pos;
                std::vector<TypeExpr> targs;
                if (atSymbol("[")) {
                    if (!parseTypeArgs(targs)) return nullptr;
                }
                if (atSymbol("(")) {
                    std::vector<ExprPtr> args;
                    if (!parseArgList(args)) return nullptr;
                    ExprPtr node = makeNode(Expr::Kind::MethodCall, sp);
                    node->name = std::move(member);
                    node->nameTokenIndex = nmTok;
                    node->a = std::move(e);
                    node->typeArgs = std::move(targs);
                    node->args = std::move(args);
                    node->hasArgList = true;
                    e = std::move(node);
                } else if (!targs.empty()) {
                    ExprPtr node = makeNode(Expr::Kind::MethodCall, sp);
                    node->name = std::move(member);
                    node->nameTokenIndex = nmTok;
                    node->a = std::move(e);
                    node->typeArgs = std::move(targs);
                    node->hasArgList = false;
                    e = std::move(node);
                } else {
                    ExprPtr node = makeNode(Expr::Kind::FieldAccess, sp);
                    node->name = std::move(member);
                    node->nameTokenIndex = nmTok;
                    node->a = std::move(e);
                    e = std::move(node);
                }
                continue;
            }
            if (t->isSymbol("(")) {
                std::vector<ExprPtr> args;
                SourceSpan sp = t->span();
                if (!parseArgList(args)) return nullptr;
                ExprPtr node = makeNode(Expr::Kind::Call, sp);
                node->a = std::move(e);
                node->args = std::move(args);
                node->hasArgList = true;
                e = std::move(node);
                continue;
            }
            break;
        }
        return e;
    }

    bool parseTypeArgs(std::vector<TypeExpr>& out) {
        // cur() is '['
        ++pos;
        int begin = static_cast<int>(pos);
        TypeExpr first;
        if (!parseTypeExpr(first)) return false;
        out.push_back(std::move(first));
        while (atSymbol(",")) {
            ++pos;
            TypeExpr next;
            if (!parseTypeExpr(next)) return false;
            out.push_back(std::move(next));
        }
        typeRanges.emplace_back(begin, static_cast<int>(pos));
        if (!expectSymbol("]")) return false;
        return true;
    }

    bool parseArgList(std::vector<ExprPtr>& out) {
        // cur() is '('
        ++pos;
        if (atSymbol(")")) { ++pos; return true; }
        ExprPtr first = parseExpr();
        if (!first) return false;
        out.push_back(std::move(first));
        while (atSymbol(",")) {
            ++pos;
            ExprPtr next = parseExpr();
            if (!next) return false;
            out.push_back(std::move(next));
        }
        return expectSymbol(")");
    }

    bool looksLikeParenLambda() const {
        // '(' ident (':' type)? (',' ...)* ')' '=>'  — scan to the matching paren
        size_t p = pos;
        int depth = 0;
        while (p < toks.size()) {
            const Token& t = toks[p];
            if (t.isSymbol("(") || t.isSymbol("[")) ++depth;
            else if (t.isSymbol(")") || t.isSymbol("]")) {
                --depth;
                if (depth == 0) {
                    return p + 1 < toks.size() && toks[p + 1].isSymbol("=>");
                }
            }
            ++p;
        }
        return false;
    }

    ExprPtr parseLambda() {
        SourceSpan sp = hereSpan();
        std::vector<LambdaParam> params;
        if (atSymbol("(")) {
            ++pos;
            if (!atSymbol(")")) {
                while (true) {
                    const Token* t = cur();
                    if (!t || t->kind != TokenKind::Ident || isKeyword(t->text)) {
                        error("expected parameter name");
                        return nullptr;
                    }
                    LambdaParam p;
                    p.name = t->identName();
                    p.nameTokenIndex = static_cast<int>(pos);
                    ++pos;
                    if (atSymbol(":")) {
                        ++pos;
                        TypeExpr ty;
                        if (!parseTypeExprRecorded(ty)) return nullptr;
                        p.declaredType = std::move(ty);
                    }
                    params.push_back(std::move(p));
                    if (atSymbol(",")) { ++pos; continue; }
                    break;
                }
            }
            if (!expectSymbol(")")) return nullptr;
        } else {
            const Token* t = cur();
            LambdaParam p;
            p.name = t->identName();
            p.nameTokenIndex = static_cast<int>(pos);
            ++pos;
            params.push_back(std::move(p));
        }
        for (size_t i = 0; i < params.size(); ++i)
            for (size_t j = i + 1; j < params.size(); ++j)
                if (params[i].name == params[j].name) {
                    error("duplicate lambda parameter '" + params[i].name + "'");
                    return nullptr;
                }
        if (!expectSymbol("=>")) return nullptr;
        ExprPtr body = parseExpr();
        if (!body) return nullptr;
        ExprPtr node = makeNode(Expr::Kind::Lambda, sp);
        node->params = std::move(params);
        node->a = std::move(body);
        return node;
    }

    ExprPtr parsePrimary() {
        const Token* t = cur();
        if (!t) {
            error("expected expression");
            return nullptr;
        }
        switch (t->kind) {
            case TokenKind::Int: {
                ExprPtr e = makeNode(Expr::Kind::IntLit, t->span());
                e->litText = t->text;
                ++pos;
                return e;
            }
            case TokenKind::Decimal: {
                ExprPtr e = makeNode(Expr::Kind::DecimalLit, t->span());
                e->litText = t->text;
                ++pos;
                return e;
            }
            case TokenKind::String: {
                ExprPtr e = makeNode(Expr::Kind::StringLit, t->span());
                e->litText = t->text;
                e->strValue = decodeString(t->text);
                ++pos;
                return e;
            }
            case TokenKind::Error:
                error("unexpected input");
                return nullptr;
            default:
                break;
        }
        if (t->isSymbol("(")) {
            if (looksLikeParenLambda()) return parseLambda();
            ++pos;
            ExprPtr inner = parseExpr();
            if (!inner) return nullptr;
            if (!expectSymbol(")")) return nullptr;
            return inner;
        }
        if (t->kind == TokenKind::Ident) {
            if (t->text == "if") return parseConditional();
            if (t->text == "val" || t->text == "else") {
                error(std::string("unexpected '") + t->text + "'");
                return nullptr;
            }
            const Token* nxt = peek(1);
            if (nxt && nxt->isSymbol("=>")) return parseLambda();

            std::string name = t->identName();
            int nameTok = static_cast<int>(pos);
            SourceSpan sp = t->span();
            ++pos;
            std::vector<TypeExpr> targs;
            bool hasTargs = false;
            if (atSymbol("[")) {
                hasTargs = true;
                if (!parseTypeArgs(targs)) return nullptr;
            }
            if (atSymbol("(")) {
                std::vector<ExprPtr> args;
                if (!parseArgList(args)) return nullptr;
                if (name == "List" && targs.size() == 1) {
                    ExprPtr node = makeNode(Expr::Kind::ListLit, sp);
                    node->name = name;
                    node->nameTokenIndex = nameTok;
                    node->typeArgs = std::move(targs);
                    node->args = std::move(args);
                    node->hasArgList = true;
                    return node;
                }
                ExprPtr callee = makeNode(Expr::Kind::Ident, sp);
                callee->name = std::move(name);
                callee->nameTokenIndex = nameTok;
                ExprPtr node = makeNode(Expr::Kind::Call, sp);
                node->a = std::move(callee);
                node->typeArgs = std::move(targs);
                node->args = std::move(args);
                node->hasArgList = true;
                return node;
            }
            if (hasTargs) {
                ExprPtr callee = makeNode(Expr::Kind::Ident, sp);
                callee->name = std::move(name);
                callee->nameTokenIndex = nameTok;
                ExprPtr node = makeNode(Expr::Kind::Call, sp);
                node->a = std::move(callee);
                node->typeArgs = std::move(targs);
                node->hasArgList = false;
                return node;
            }
            ExprPtr e = makeNode(Expr::Kind::Ident, sp);
            e->name = std::move(name);
            e->nameTokenIndex = nameTok;
            return e;
        }
        error("expected expression");
        return nullptr;
    }

    ExprPtr parseConditional() {
        SourceSpan sp = cur()->span();
        ++pos;  // 'if'
        if (!expectSymbol("(")) return nullptr;
        ExprPtr cond = parseExpr();
        if (!cond) return nullptr;
        if (!expectSymbol(")")) return nullptr;
        ExprPtr thenE = parseExpr();
        if (!thenE) return nullptr;
        if (!atIdent("else")) {
            error("expected 'else'");
            return nullptr;
        }
        ++pos;
        ExprPtr elseE = parseExpr();
        if (!elseE) return nullptr;
        ExprPtr node = makeNode(Expr::Kind::Conditional, sp);
        node->a = std::move(cond);
        node->b = std::move(thenE);
        node->c = std::move(elseE);
        return node;
    }

    bool parseFragment(Fragment& out) {
        out.tokenBegin = static_cast<int>(pos);
        const Token* t = cur();
        out.span = t->span();
        ++pos;  // 'val'
        const Token* nm = cur();
        if (!nm || nm->kind != TokenKind::Ident || isKeyword(nm->text)) {
            error("expected variable name after 'val'");
            return false;
        }
        out.varName = nm->identName();
        out.varTokenIndex = static_cast<int>(pos);
        ++pos;
        if (atSymbol(":")) {
            out.ascriptionBegin = static_cast<int>(pos);
            ++pos;
            TypeExpr ty;
            if (!parseTypeExprRecorded(ty)) return false;
            out.declaredType = std::move(ty);
            out.ascriptionEnd = static_cast<int>(pos);
        }
        if (!atSymbol("=")) {
            error("expected '='");
            return false;
        }
        ++pos;
        out.expr = parseExpr();
        if (!out.expr) return false;
        out.tokenEnd = static_cast<int>(pos);
        return true;
    }
};

}  // namespace

namespace {

void markWordOps(const Expr& e, std::vector<Token>& tokens) {
    if (e.kind == Expr::Kind::Infix && e.nameTokenIndex >= 0 &&
        static_cast<size_t>(e.nameTokenIndex) < tokens.size() &&
        tokens[static_cast<size_t>(e.nameTokenIndex)].kind == TokenKind::Ident) {
        tokens[static_cast<size_t>(e.nameTokenIndex)].wordOp = true;
    }
    if (e.a) markWordOps(*e.a, tokens);
    if (e.b) markWordOps(*e.b, tokens);
    if (e.c) markWordOps(*e.c, tokens);
    for (const auto& arg : e.args) markWordOps(*arg, tokens);
}

}  // namespace

void markWordOperators(const Program& program, std::vector<Token>& tokens) {
    for (const Fragment& f : program.fragments) markWordOps(*f.expr, tokens);
}

ParseResult parseProgram(const std::string& text) {
    ParseResult res;
    LexResult lx = lex(text);
    res.tokens = std::move(lx.tokens);
    res.diagnostics = std::move(lx.diagnostics);
    if (!res.diagnostics.empty()) return res;

    Parser p{res.tokens, res.diagnostics, res.typeTokenRanges};
    Program prog;
    while (p.pos < res.tokens.size()) {
        if (!p.atIdent("val")) {
            p.error("expected 'val'");
            return res;
        }
        Fragment frag;
        if (!p.parseFragment(frag)) return res;
        prog.fragments.push_back(std::move(frag));
    }
    markWordOperators(prog, res.tokens);
    for (Fragment& frag : prog.fragments) {
        std::vector<Token> fragToks(res.tokens.begin() + frag.tokenBegin,
                                    res.tokens.begin() + frag.tokenEnd);
        frag.sourceText = joinTokens(fragToks);
    }
    if (prog.fragments.empty()) {
        // empty input is not a program
        res.diagnostics.push_back(
            Diagnostic{DiagKind::Syntax, SourceSpan{1, 1, 1}, "empty program"});
        return res;
    }
    res.ok = true;
    res.program = std::move(prog);
    return res;
}

bool parseTypeExprTokens(const std::vector<Token>& toks, size_t& pos, TypeExpr& out,
                         std::vector<Diagnostic>& diags) {
    std::vector<std::pair<int, int>> ranges;
    Parser p{toks, diags, ranges};
    p.pos = pos;
    bool ok = p.parseTypeExpr(out);
    pos = p.pos;
    return ok;
}

}  // namespace domainlang
