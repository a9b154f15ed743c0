#include "domainlang/parser.hpp"

#include <cctype>

namespace domainlang {

namespace {

int opPrec(const std::string& op) {
    char c = op[0];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return 1;
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

bool needsBackticks(const std::string& name) {
    if (name == "val" || name == "if" || name == "else" || name == "this") return true;
    if (name.empty()) return true;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return true;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
    return false;
}

std::string identText(const std::string& name) {
    if (needsBackticks(name)) return "`" + name + "`";
    return name;
}

std::string encodeString(const std::string& v) {
    std::string out = "\"";
    for (char c : v) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c; break;
        }
    }
    out += '"';
    return out;
}

void print(const Expr& e, std::string& out);

void printWrapped(const Expr& e, std::string& out, bool wrap) {
    if (wrap) out += '(';
    print(e, out);
    if (wrap) out += ')';
}

bool isLoose(const Expr& e) {
    return e.kind == Expr::Kind::Lambda || e.kind == Expr::Kind::Conditional;
}

void printTypeArgs(const std::vector<TypeExpr>& targs, std::string& out) {
    if (targs.empty()) return;
    out += '[';
    for (size_t i = 0; i < targs.size(); ++i) {
        if (i) out += ", ";
        out += targs[i].str();
    }
    out += ']';
}

void printArgs(const std::vector<ExprPtr>& args, std::string& out) {
    out += '(';
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        print(*args[i], out);
    }
    out += ')';
}

void print(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Ident:
            out += identText(e.name);
            return;
        case Expr::Kind::IntLit:
        case Expr::Kind::DecimalLit:
            out += e.litText;
            return;
        case Expr::Kind::StringLit:
            out += encodeString(e.strValue);
            return;
        case Expr::Kind::Call: {
            bool wrap = e.a->kind != Expr::Kind::Ident && e.a->kind != Expr::Kind::Call &&
                        e.a->kind != Expr::Kind::FieldAccess && e.a->kind != Expr::Kind::MethodCall;
            printWrapped(*e.a, out, wrap);
            printTypeArgs(e.typeArgs, out);
            if (e.hasArgList) printArgs(e.args, out);
            return;
        }
        case Expr::Kind::FieldAccess:
        case Expr::Kind::MethodCall: {
            bool wrap = isLoose(*e.a) || e.a->kind == Expr::Kind::Infix;
            printWrapped(*e.a, out, wrap);
            out += '.';
            out += identText(e.name);
            if (e.kind == Expr::Kind::MethodCall) {
                printTypeArgs(e.typeArgs, out);
                if (e.hasArgList) printArgs(e.args, out);
            }
            return;
        }
        case Expr::Kind::Infix: {
            int prec = opPrec(e.name);
            bool wrapL = isLoose(*e.a) ||
                         (e.a->kind == Expr::Kind::Infix && opPrec(e.a->name) < prec);
            bool wrapR = isLoose(*e.b) ||
                         (e.b->kind == Expr::Kind::Infix && opPrec(e.b->name) <= prec);
            printWrapped(*e.a, out, wrapL);
            out += ' ';
            out += e.name;
            out += ' ';
            printWrapped(*e.b, out, wrapR);
            return;
        }
        case Expr::Kind::Lambda: {
            bool bare = e.params.size() == 1 && !e.params[0].declaredType;
            if (bare) {
                out += identText(e.params[0].name);
            } else {
                out += '(';
                for (size_t i = 0; i < e.params.size(); ++i) {
                    if (i) out += ", ";
                    out += identText(e.params[i].name);
                    if (e.params[i].declaredType) {
                        out += ": ";
                        out += e.params[i].declaredType->str();
                    }
                }
                out += ')';
            }
            out += " => ";
            print(*e.a, out);
            return;
        }
        case Expr::Kind::ListLit: {
            out += "List";
            printTypeArgs(e.typeArgs, out);
            printArgs(e.args, out);
            return;
        }
        case Expr::Kind::Conditional: {
            out += "if (";
            print(*e.a, out);
            out += ") ";
            print(*e.b, out);
            out += " else ";
            print(*e.c, out);
            return;
        }
    }
}

}  // namespace

std::string printExpr(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

std::string printProgram(const Program& p) {
    std::string out;
    for (size_t i = 0; i < p.fragments.size(); ++i) {
        if (i) out += '\n';
        const Fragment& f = p.fragments[i];
        out += "val ";
        out += identText(f.varName);
        if (f.declaredType) {
            out += ": ";
            out += f.declaredType->str();
        }
        out += " = ";
        print(*f.expr, out);
    }
    return out;
}

}  // namespace domainlang
