#include "domainlang/signature.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "domainlang/parser.hpp"
#include "domainlang/token.hpp"

namespace domainlang {

namespace {

// Rewrites names listed in typeParams into type variables.
TypeExpr bindTypeVars(const TypeExpr& t, const std::vector<std::string>& typeParams) {
    if (t.kind == TypeExpr::Kind::Named && t.args.empty() &&
        std::find(typeParams.begin(), typeParams.end(), t.name) != typeParams.end()) {
        return TypeExpr::var(t.name);
    }
    TypeExpr out = t;
    for (auto& a : out.args) a = bindTypeVars(a, typeParams);
    for (auto& r : out.ret) r = bindTypeVars(r, typeParams);
    return out;
}

struct LineParser {
    const std::string& origin;
    int lineNo;
    std::vector<Token> toks;
    size_t pos = 0;

    LineParser(const std::string& originName, int line, const std::string& text)
        : origin(originName), lineNo(line) {
        LexResult lx = lex(text);
        if (!lx.diagnostics.empty()) {
            throw SignatureError(origin, lineNo, lx.diagnostics.front().message);
        }
        toks = std::move(lx.tokens);
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SignatureError(origin, lineNo, msg);
    }

    bool done() const { return pos >= toks.size(); }
    const Token& cur() const {
        if (done()) fail("unexpected end of line");
        return toks[pos];
    }
    bool atSymbol(std::string_view s) const { return !done() && toks[pos].isSymbol(s); }
    bool atIdent(std::string_view s) const { return !done() && toks[pos].isIdent(s); }

    std::string expectName(const char* what) {
        if (done()) fail(std::string("expected ") + what);
        const Token& t = toks[pos];
        // operator names (e.g. +, /&) are allowed for functions
        if (t.kind != TokenKind::Ident && t.kind != TokenKind::Symbol)
            fail(std::string("expected ") + what);
        if (t.kind == TokenKind::Symbol &&
            (t.text == "(" || t.text == ")" || t.text == "[" || t.text == "]" ||
             t.text == "," || t.text == "." || t.text == ":" || t.text == "=" ||
             t.text == "=>" || t.text == "->"))
            fail(std::string("expected ") + what);
        ++pos;
        return t.identName();
    }

    void expectSymbol(std::string_view s) {
        if (!atSymbol(s)) fail(std::string("expected '") + std::string(s) + "'");
        ++pos;
    }

    TypeExpr parseType() {
        TypeExpr out;
        std::vector<Diagnostic> diags;
        if (!parseTypeExprTokens(toks, pos, out, diags)) {
            fail(diags.empty() ? "invalid type" : diags.front().message);
        }
        return out;
    }

    std::vector<std::string> parseTypeParams() {
        std::vector<std::string> names;
        if (!atSymbol("[")) return names;
        ++pos;
        while (true) {
            names.push_back(expectName("type parameter"));
            if (atSymbol(",")) { ++pos; continue; }
            break;
        }
        expectSymbol("]");
        return names;
    }

    std::vector<TypeExpr> parseParamTypes() {
        std::vector<TypeExpr> params;
        expectSymbol("(");
        if (atSymbol(")")) { ++pos; return params; }
        while (true) {
            params.push_back(parseType());
            if (atSymbol(",")) { ++pos; continue; }
            break;
        }
        expectSymbol(")");
        return params;
    }
};

std::string stripComment(const std::string& line) {
    bool inString = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') inString = !inString;
        if (line[i] == '#' && !inString) return line.substr(0, i);
    }
    return line;
}

bool blankLine(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

void DomainSignature::finalize(const std::string& origin) {
    typeByName.clear();
    funcsByName.clear();
    extsByName.clear();
    aliasToCanonical.clear();

    for (const auto& t : types) {
        if (builtins.types.count(t.name))
            throw SignatureError(origin, t.line, "type '" + t.name + "' is builtin");
        if (!typeByName.emplace(t.name, &t).second)
            throw SignatureError(origin, t.line, "duplicate type '" + t.name + "'");
    }

    auto resolvable = [&](const TypeExpr& te, const std::vector<std::string>& tps,
                          auto&& self) -> std::string {
        if (te.kind == TypeExpr::Kind::Named) {
            bool isParam = std::find(tps.begin(), tps.end(), te.name) != tps.end();
            const TypeDecl* d = nullptr;
            auto it = typeByName.find(te.name);
            if (it != typeByName.end()) d = it->second;
            if (!isParam && !d && !builtins.types.count(te.name))
                return "unknown type '" + te.name + "'";
            int arity = d           ? d->arity
                        : isParam   ? 0
                                    : builtins.typeArity(te.name);
            if (static_cast<int>(te.args.size()) != arity)
                return "type '" + te.name + "' expects " + std::to_string(arity) +
                       " type argument(s)";
        }
        for (const auto& a : te.args) {
            std::string err = self(a, tps, self);
            if (!err.empty()) return err;
        }
        for (const auto& r : te.ret) {
            std::string err = self(r, tps, self);
            if (!err.empty()) return err;
        }
        return std::string();
    };

    for (const auto& t : types) {
        for (const auto& [fname, fty] : t.fields) {
            std::string err = resolvable(fty, {}, resolvable);
            if (!err.empty())
                throw SignatureError(origin, t.line,
                                     "field '" + t.name + "." + fname + "': " + err);
        }
    }

    for (const auto& f : functions) {
        std::string err;
        if (f.receiver) err = resolvable(*f.receiver, f.typeParams, resolvable);
        for (const auto& p : f.params) {
            if (!err.empty()) break;
            err = resolvable(p, f.typeParams, resolvable);
        }
        if (err.empty()) err = resolvable(f.ret, f.typeParams, resolvable);
        if (!err.empty())
            throw SignatureError(origin, f.line, "function '" + f.name + "': " + err);

        auto& bucket = f.isExtension() ? extsByName[f.name] : funcsByName[f.name];
        for (const FuncDecl* prev : bucket) {
            bool same = prev->params.size() == f.params.size() &&
                        prev->receiver.has_value() == f.receiver.has_value();
            if (same && prev->receiver && !(*prev->receiver == *f.receiver)) same = false;
            if (same) {
                for (size_t i = 0; i < f.params.size(); ++i)
                    if (!(prev->params[i] == f.params[i])) { same = false; break; }
            }
            if (same)
                throw SignatureError(origin, f.line,
                                     "duplicate declaration of '" + f.name + "'");
        }
        bucket.push_back(&f);
    }

    for (const auto& c : conversions) {
        if (c.from == c.to)
            throw SignatureError(origin, c.line, "self conversion " + c.from.str());
    }

    for (const auto& [canonical, surfaces] : aliases) {
        if (!funcsByName.count(canonical) && !extsByName.count(canonical))
            throw SignatureError(origin, 0,
                                 "alias target '" + canonical + "' is not declared");
        for (const auto& s : surfaces) {
            if (funcsByName.count(s) || extsByName.count(s))
                throw SignatureError(origin, 0,
                                     "alias '" + s + "' collides with a declared function");
            auto [it, inserted] = aliasToCanonical.emplace(s, canonical);
            if (!inserted && it->second != canonical)
                throw SignatureError(origin, 0,
                                     "alias '" + s + "' maps to two canonical names");
        }
    }
}

const TypeDecl* DomainSignature::findType(const std::string& name) const {
    auto it = typeByName.find(name);
    return it == typeByName.end() ? nullptr : it->second;
}

bool DomainSignature::isTypeName(const std::string& name) const {
    return typeByName.count(name) > 0 || builtins.types.count(name) > 0;
}

const std::string& DomainSignature::canonicalName(const std::string& name) const {
    auto it = aliasToCanonical.find(name);
    return it == aliasToCanonical.end() ? name : it->second;
}

DomainSignature parseSignatureText(const std::string& text, const std::string& originName) {
    DomainSignature sig;
    std::istringstream in(text);
    std::string rawLine;
    int lineNo = 0;
    std::vector<std::tuple<std::string, std::string, int>> aliasLines;  // surface, canonical

    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string line = stripComment(rawLine);
        if (blankLine(line)) continue;
        LineParser lp(originName, lineNo, line);

        if (lp.atIdent("type")) {
            ++lp.pos;
            TypeDecl td;
            td.line = lineNo;
            td.name = lp.expectName("type name");
            if (lp.atSymbol("[")) {
                ++lp.pos;
                if (lp.cur().kind != TokenKind::Int) lp.fail("expected type-parameter arity");
                td.arity = std::stoi(lp.cur().text);
                ++lp.pos;
                lp.expectSymbol("]");
            }
            if (!lp.done()) {
                // optional field list: { name: Type, ... }
                lp.expectSymbol("{");
                while (true) {
                    std::string fname = lp.expectName("field name");
                    lp.expectSymbol(":");
                    TypeExpr fty = lp.parseType();
                    td.fields.emplace_back(fname, fty);
                    if (lp.atSymbol(",")) { ++lp.pos; continue; }
                    break;
                }
                lp.expectSymbol("}");
                if (!lp.done()) lp.fail("trailing input after field list");
            }
            sig.types.push_back(std::move(td));
            continue;
        }

        if (lp.atIdent("fun") || lp.atIdent("ext")) {
            bool isExt = lp.atIdent("ext");
            ++lp.pos;
            FuncDecl fd;
            fd.line = lineNo;
            fd.typeParams = lp.parseTypeParams();
            if (isExt) {
                // receiver type up to the final '.', then the member name
                TypeExpr recv = lp.parseType();
                lp.expectSymbol(".");
                fd.receiver = bindTypeVars(recv, fd.typeParams);
                fd.name = lp.expectName("function name");
            } else {
                fd.name = lp.expectName("function name");
                if (fd.typeParams.empty()) fd.typeParams = lp.parseTypeParams();
                if (lp.atSymbol(".")) {
                    ++lp.pos;
                    fd.name += "." + lp.expectName("member name");
                }
            }
            for (auto& p : lp.parseParamTypes()) fd.params.push_back(bindTypeVars(p, fd.typeParams));
            lp.expectSymbol("->");
            fd.ret = bindTypeVars(lp.parseType(), fd.typeParams);
            if (!lp.done()) {
                if (lp.atIdent("infix")) {
                    fd.infixAllowed = true;
                    ++lp.pos;
                } else if (lp.atSymbol("[")) {
                    ++lp.pos;
                    if (!lp.atIdent("infix")) lp.fail("expected 'infix'");
                    ++lp.pos;
                    lp.expectSymbol("]");
                    fd.infixAllowed = true;
                }
                if (!lp.done()) lp.fail("trailing input after declaration");
            }
            if (fd.infixAllowed && !isExt) lp.fail("only extension methods can be infix");
            sig.functions.push_back(std::move(fd));
            continue;
        }

        if (lp.atIdent("conv")) {
            ++lp.pos;
            // the whole line parses as a single function type From => To
            TypeExpr whole = lp.parseType();
            if (!lp.done()) lp.fail("trailing input after conversion");
            if (whole.kind != TypeExpr::Kind::Function || whole.args.size() != 1)
                lp.fail("conversion must have the form From => To");
            Conversion c;
            c.from = whole.args[0];
            c.to = whole.ret[0];
            c.line = lineNo;
            sig.conversions.push_back(std::move(c));
            continue;
        }

        if (lp.atIdent("alias")) {
            ++lp.pos;
            std::string surface = lp.expectName("alias name");
            lp.expectSymbol("=");
            std::string canonical = lp.expectName("canonical name");
            if (!lp.done()) lp.fail("trailing input after alias");
            aliasLines.emplace_back(surface, canonical, lineNo);
            continue;
        }

        lp.fail("expected 'type', 'fun', 'ext', 'conv' or 'alias'");
    }

    for (const auto& [surface, canonical, ln] : aliasLines) {
        for (const auto& [canon, surfaces] : sig.aliases) {
            if (canon != canonical && surfaces.count(surface))
                throw SignatureError(originName, ln,
                                     "alias '" + surface + "' maps to two canonical names");
        }
        sig.aliases[canonical].insert(surface);
    }

    sig.finalize(originName);
    return sig;
}

DomainSignature loadSignature(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open signature file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseSignatureText(buf.str(), path.filename().string());
}

}  // namespace domainlang
