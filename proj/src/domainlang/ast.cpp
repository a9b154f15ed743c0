#include "domainlang/ast.hpp"

namespace domainlang {

bool TypeExpr::operator==(const TypeExpr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Unknown:
            return true;
        case Kind::Var:
        case Kind::Named:
            if (name != o.name || args.size() != o.args.size()) return false;
            for (size_t i = 0; i < args.size(); ++i)
                if (!(args[i] == o.args[i])) return false;
            return true;
        case Kind::Function:
            if (args.size() != o.args.size()) return false;
            for (size_t i = 0; i < args.size(); ++i)
                if (!(args[i] == o.args[i])) return false;
            return ret[0] == o.ret[0];
    }
    return false;
}

std::string TypeExpr::str() const {
    switch (kind) {
        case Kind::Unknown:
            return "?";
        case Kind::Var:
            return name;
        case Kind::Named: {
            std::string s = name;
            if (!args.empty()) {
                s += '[';
                for (size_t i = 0; i < args.size(); ++i) {
                    if (i) s += ", ";
                    s += args[i].str();
                }
                s += ']';
            }
            return s;
        }
        case Kind::Function: {
            std::string s;
            if (args.size() == 1 && args[0].kind != Kind::Function) {
                s = args[0].str();
            } else {
                s = "(";
                for (size_t i = 0; i < args.size(); ++i) {
                    if (i) s += ", ";
                    s += args[i].str();
                }
                s += ")";
            }
            s += " => ";
            s += ret[0].str();
            return s;
        }
    }
    return "?";
}

namespace {

bool ptrEq(const ExprPtr& a, const ExprPtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

}  // namespace

bool Expr::operator==(const Expr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Ident:
            return name == o.name;
        case Kind::StringLit:
            return strValue == o.strValue;
        case Kind::IntLit:
        case Kind::DecimalLit:
            return litText == o.litText;
        default:
            break;
    }
    if (name != o.name || hasArgList != o.hasArgList) return false;
    if (!ptrEq(a, o.a) || !ptrEq(b, o.b) || !ptrEq(c, o.c)) return false;
    if (args.size() != o.args.size()) return false;
    for (size_t i = 0; i < args.size(); ++i)
        if (!ptrEq(args[i], o.args[i])) return false;
    if (typeArgs.size() != o.typeArgs.size()) return false;
    for (size_t i = 0; i < typeArgs.size(); ++i)
        if (!(typeArgs[i] == o.typeArgs[i])) return false;
    if (params.size() != o.params.size()) return false;
    for (size_t i = 0; i < params.size(); ++i) {
        if (params[i].name != o.params[i].name) return false;
        if (params[i].declaredType.has_value() != o.params[i].declaredType.has_value()) return false;
        if (params[i].declaredType && !(*params[i].declaredType == *o.params[i].declaredType))
            return false;
    }
    return true;
}

ExprPtr cloneExpr(const Expr& e) {
    auto out = std::make_unique<Expr>();
    out->kind = e.kind;
    out->span = e.span;
    out->name = e.name;
    out->strValue = e.strValue;
    out->litText = e.litText;
    out->hasArgList = e.hasArgList;
    out->typeArgs = e.typeArgs;
    out->params = e.params;
    out->nameTokenIndex = e.nameTokenIndex;
    if (e.a) out->a = cloneExpr(*e.a);
    if (e.b) out->b = cloneExpr(*e.b);
    if (e.c) out->c = cloneExpr(*e.c);
    for (const auto& arg : e.args) out->args.push_back(cloneExpr(*arg));
    return out;
}

bool Program::operator==(const Program& o) const {
    if (fragments.size() != o.fragments.size()) return false;
    for (size_t i = 0; i < fragments.size(); ++i) {
        const Fragment& f = fragments[i];
        const Fragment& g = o.fragments[i];
        if (f.varName != g.varName) return false;
        if (f.declaredType.has_value() != g.declaredType.has_value()) return false;
        if (f.declaredType && !(*f.declaredType == *g.declaredType)) return false;
        if (!ptrEq(f.expr, g.expr)) return false;
    }
    return true;
}

}  // namespace domainlang
