#include "domainlang/normalizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "domainlang/checker.hpp"
#include "domainlang/parser.hpp"

namespace domainlang {

namespace {

// Newlines stay newlines so that an unlexable input (say, an unterminated
// string) cannot become lexable on a second pass.
std::string collapseWhitespace(const std::string& text) {
    std::string out;
    bool pending = false;
    bool sawNewline = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            sawNewline = sawNewline || c == '\n';
            continue;
        }
        if (pending) out += sawNewline ? '\n' : ' ';
        pending = false;
        sawNewline = false;
        out += c;
    }
    return out;
}

bool symbolicName(const std::string& name) {
    return !name.empty() && !std::isalpha(static_cast<unsigned char>(name[0])) &&
           name[0] != '_' && name[0] != '`';
}

// Scope-aware walk marking which identifier tokens are variables (binders,
// lambda parameters, references) as opposed to function names.
struct ScopeWalk {
    std::set<std::string> stepVars;
    std::vector<std::set<std::string>> frames;
    // token index -> bound name (for references/binders), used for renaming
    std::map<int, std::string> varTokens;
    std::set<int> lambdaParamTokens;

    bool inScope(const std::string& name) const {
        for (auto it = frames.rbegin(); it != frames.rend(); ++it)
            if (it->count(name)) return true;
        return stepVars.count(name) > 0;
    }

    bool isLambdaLocal(const std::string& name) const {
        for (auto it = frames.rbegin(); it != frames.rend(); ++it)
            if (it->count(name)) return true;
        return false;
    }

    void visit(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Ident:
                if (inScope(e.name) && e.nameTokenIndex >= 0) {
                    if (isLambdaLocal(e.name))
                        lambdaParamTokens.insert(e.nameTokenIndex);
                    else
                        varTokens.emplace(e.nameTokenIndex, e.name);
                }
                return;
            case Expr::Kind::Lambda: {
                std::set<std::string> frame;
                for (const auto& p : e.params) {
                    frame.insert(p.name);
                    if (p.nameTokenIndex >= 0) lambdaParamTokens.insert(p.nameTokenIndex);
                }
                frames.push_back(std::move(frame));
                visit(*e.a);
                frames.pop_back();
                return;
            }
            default:
                break;
        }
        if (e.a) visit(*e.a);
        if (e.b) visit(*e.b);
        if (e.c) visit(*e.c);
        for (const auto& arg : e.args) visit(*arg);
    }
};

struct WalkResult {
    std::map<int, std::string> binderTokens;     // token index -> bound name
    std::map<int, std::string> referenceTokens;  // token index -> referenced name
    std::set<int> lambdaTokens;
};

WalkResult walkProgram(const Program& prog) {
    WalkResult out;
    ScopeWalk w;
    for (const Fragment& f : prog.fragments) {
        w.visit(*f.expr);
        if (f.varTokenIndex >= 0) out.binderTokens.emplace(f.varTokenIndex, f.varName);
        w.stepVars.insert(f.varName);
    }
    out.referenceTokens = std::move(w.varTokens);
    out.lambdaTokens = std::move(w.lambdaParamTokens);
    return out;
}

std::string rejoin(const std::vector<Token>& toks, const std::set<int>& dropped,
                   const std::map<int, std::pair<std::string, TokenKind>>& replaced) {
    std::vector<Token> kept;
    kept.reserve(toks.size());
    for (size_t i = 0; i < toks.size(); ++i) {
        if (dropped.count(static_cast<int>(i))) continue;
        Token t = toks[i];
        auto it = replaced.find(static_cast<int>(i));
        if (it != replaced.end()) {
            t.text = it->second.first;
            t.kind = it->second.second;
        }
        kept.push_back(std::move(t));
    }
    return joinTokens(kept);
}

}  // namespace

std::string normalizeProgram(const std::string& text, const DomainSignature& sig) {
    LexResult lx = lex(text);
    if (!lx.diagnostics.empty()) {
        // not even lexable: whitespace-only normalization
        return collapseWhitespace(text);
    }
    ParseResult pr = parseProgram(text);
    if (!pr.ok) return joinTokens(lx.tokens);
    markWordOperators(pr.program, pr.tokens);

    std::set<int> dropped;
    std::map<int, std::pair<std::string, TokenKind>> replaced;

    // 1. remove ascriptions that inference re-derives
    bool anyAscription = false;
    for (const Fragment& f : pr.program.fragments)
        if (f.declaredType) anyAscription = true;
    if (anyAscription) {
        Program bare;
        for (const Fragment& f : pr.program.fragments) {
            Fragment g;
            g.varName = f.varName;
            g.expr = cloneExpr(*f.expr);
            bare.fragments.push_back(std::move(g));
        }
        CheckOptions opts;
        opts.allowFreeStepVars = true;
        CheckResult cr = checkProgram(bare, sig, opts);
        for (size_t i = 0; i < pr.program.fragments.size(); ++i) {
            const Fragment& f = pr.program.fragments[i];
            if (!f.declaredType || f.ascriptionBegin < 0) continue;
            if (cr.fragmentTypes[i] == *f.declaredType) {
                for (int t = f.ascriptionBegin; t < f.ascriptionEnd; ++t) dropped.insert(t);
            }
        }
    }

    // 2. canonicalize alias names on function-position tokens
    if (!sig.aliasToCanonical.empty()) {
        WalkResult wr = walkProgram(pr.program);
        std::set<int> typeTokens;
        for (const auto& [b, e] : pr.typeTokenRanges)
            for (int t = b; t < e; ++t) typeTokens.insert(t);
        for (size_t i = 0; i < pr.tokens.size(); ++i) {
            int ti = static_cast<int>(i);
            const Token& tok = pr.tokens[i];
            if (tok.kind != TokenKind::Ident && tok.kind != TokenKind::Symbol) continue;
            if (tok.kind == TokenKind::Ident &&
                (tok.isIdent("val") || tok.isIdent("if") || tok.isIdent("else")))
                continue;
            if (wr.binderTokens.count(ti) || wr.referenceTokens.count(ti) ||
                wr.lambdaTokens.count(ti) || typeTokens.count(ti))
                continue;
            auto it = sig.aliasToCanonical.find(tok.identName());
            if (it == sig.aliasToCanonical.end()) continue;
            const std::string& canon = it->second;
            replaced[ti] = {canon, symbolicName(canon) ? TokenKind::Symbol : TokenKind::Ident};
        }
    }

    return rejoin(pr.tokens, dropped, replaced);
}

std::string renameStepVars(const std::string& text) {
    ParseResult pr = parseProgram(text);
    if (!pr.ok) return text;
    markWordOperators(pr.program, pr.tokens);

    std::map<int, std::pair<std::string, TokenKind>> replaced;
    // binder j gets name s{j+1}; references follow the latest binding of that name
    std::map<std::string, std::string> renames;
    ScopeWalk w;
    struct Ref {
        int token;
        std::string name;
    };
    for (size_t j = 0; j < pr.program.fragments.size(); ++j) {
        const Fragment& f = pr.program.fragments[j];
        // collect references inside this fragment under the scope built so far
        ScopeWalk local;
        local.stepVars = w.stepVars;
        local.visit(*f.expr);
        for (const auto& [tok, name] : local.varTokens) {
            auto it = renames.find(name);
            if (it != renames.end() && it->second != name)
                replaced[tok] = {it->second, TokenKind::Ident};
        }
        std::string canonical = "s" + std::to_string(j + 1);
        if (f.varName != canonical && f.varTokenIndex >= 0)
            replaced[f.varTokenIndex] = {canonical, TokenKind::Ident};
        renames[f.varName] = canonical;
        w.stepVars.insert(f.varName);
    }
    if (replaced.empty()) return joinTokens(pr.tokens);
    return rejoin(pr.tokens, {}, replaced);
}

std::string canonicalForComparison(const std::string& text, const DomainSignature& sig) {
    return renameStepVars(normalizeProgram(text, sig));
}

FragmentRepair repairFragmentBinding(const std::string& fragmentText,
                                     const std::string& canonicalVar,
                                     const std::map<std::string, std::string>& priorRenames) {
    FragmentRepair out;
    out.text = fragmentText;
    ParseResult pr = parseProgram(fragmentText);
    if (!pr.ok || pr.program.fragments.size() != 1) return out;
    markWordOperators(pr.program, pr.tokens);
    const Fragment& frag = pr.program.fragments[0];
    out.parsed = true;
    out.oldVar = frag.varName;

    std::map<int, std::pair<std::string, TokenKind>> replaced;
    // references resolve to the previous binding of that name, so they follow
    // the rename map built from earlier repairs
    ScopeWalk w;
    for (const auto& [from, to] : priorRenames) {
        (void)to;
        w.stepVars.insert(from);
    }
    w.visit(*frag.expr);
    for (const auto& [tok, name] : w.varTokens) {
        auto it = priorRenames.find(name);
        if (it != priorRenames.end() && it->second != name)
            replaced[tok] = {it->second, TokenKind::Ident};
    }
    if (frag.varName != canonicalVar && frag.varTokenIndex >= 0)
        replaced[frag.varTokenIndex] = {canonicalVar, TokenKind::Ident};
    // untouched fragments stay byte-identical to the generated text
    if (!replaced.empty()) out.text = rejoin(pr.tokens, {}, replaced);
    return out;
}

}  // namespace domainlang
