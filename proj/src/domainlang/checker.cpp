#include "domainlang/checker.hpp"

#include <algorithm>
#include <cctype>

#include "domainlang/parser.hpp"

namespace domainlang {

bool isStepVarName(const std::string& name) {
    if (name.empty() || name[0] != 's') return false;
    for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    return true;
}

namespace {

using Binds = std::map<std::string, TypeExpr>;

TypeExpr subst(const TypeExpr& t, const Binds& b) {
    if (t.kind == TypeExpr::Kind::Var) {
        auto it = b.find(t.name);
        return it == b.end() ? t : it->second;
    }
    TypeExpr out = t;
    for (auto& a : out.args) a = subst(a, b);
    for (auto& r : out.ret) r = subst(r, b);
    return out;
}

bool hasVar(const TypeExpr& t) {
    if (t.kind == TypeExpr::Kind::Var) return true;
    for (const auto& a : t.args)
        if (hasVar(a)) return true;
    for (const auto& r : t.ret)
        if (hasVar(r)) return true;
    return false;
}

// Structural unification of a declared type against an actual type.
// Generics are invariant; Unknown unifies with anything.
bool unify(const TypeExpr& decl, const TypeExpr& actual, Binds& b) {
    if (actual.isUnknown()) return true;
    if (decl.kind == TypeExpr::Kind::Var) {
        auto it = b.find(decl.name);
        if (it != b.end()) return it->second == actual || it->second.isUnknown();
        b[decl.name] = actual;
        return true;
    }
    if (decl.kind != actual.kind) return false;
    if (decl.kind == TypeExpr::Kind::Named) {
        if (decl.name != actual.name || decl.args.size() != actual.args.size()) return false;
        for (size_t i = 0; i < decl.args.size(); ++i)
            if (!unify(decl.args[i], actual.args[i], b)) return false;
        return true;
    }
    if (decl.kind == TypeExpr::Kind::Function) {
        if (decl.args.size() != actual.args.size()) return false;
        for (size_t i = 0; i < decl.args.size(); ++i)
            if (!unify(decl.args[i], actual.args[i], b)) return false;
        return unify(decl.ret[0], actual.ret[0], b);
    }
    return false;
}

struct Checker {
    const DomainSignature& sig;
    CheckOptions opts;
    std::vector<Diagnostic>* diags;
    std::map<std::string, TypeExpr> stepVars;
    std::vector<std::map<std::string, TypeExpr>> scopes;

    void report(DiagKind k, SourceSpan sp, std::string msg) {
        diags->push_back(Diagnostic{k, sp, std::move(msg)});
    }

    bool convertible(const TypeExpr& from, const TypeExpr& to) const {
        if (from == to) return true;
        for (const auto& c : sig.conversions)
            if (c.from == from && c.to == to) return true;
        return false;
    }

    // Accepts `actual` where `decl` (after current binds) is expected,
    // via unification or a single implicit conversion.
    bool accepts(const TypeExpr& decl, const TypeExpr& actual, Binds& b) const {
        Binds trial = b;
        if (unify(decl, actual, trial)) {
            b = std::move(trial);
            return true;
        }
        TypeExpr ground = subst(decl, b);
        if (!hasVar(ground) && !actual.isUnknown()) {
            for (const auto& c : sig.conversions) {
                if (c.from == actual && c.to == ground) return true;
            }
        }
        return false;
    }

    bool validateTypeExpr(const TypeExpr& t, SourceSpan sp) {
        if (t.kind == TypeExpr::Kind::Named) {
            const TypeDecl* d = sig.findType(t.name);
            bool builtin = sig.builtins.types.count(t.name) > 0;
            if (!d && !builtin) {
                report(DiagKind::UnknownType, sp, "unknown type '" + t.name + "'");
                return false;
            }
            int arity = d ? d->arity : sig.builtins.typeArity(t.name);
            if (static_cast<int>(t.args.size()) != arity) {
                report(DiagKind::UnknownType, sp,
                       "type '" + t.name + "' expects " + std::to_string(arity) +
                           " type argument(s)");
                return false;
            }
        }
        bool ok = true;
        for (const auto& a : t.args) ok = validateTypeExpr(a, sp) && ok;
        for (const auto& r : t.ret) ok = validateTypeExpr(r, sp) && ok;
        return ok;
    }

    const TypeExpr* lookupLocal(const std::string& name) const {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        auto f = stepVars.find(name);
        if (f != stepVars.end()) return &f->second;
        return nullptr;
    }

    // ---- overload resolution ----

    struct ArgSlot {
        const Expr* expr = nullptr;
        TypeExpr type;   // pre-inferred; Unknown placeholder for lambdas
        bool isLambda = false;
    };

    // Tries to match one candidate. Appends lambda-body diagnostics to
    // scratch; on failure the caller discards them.
    bool matchCandidate(const FuncDecl& cand, const std::vector<TypeExpr>& typeArgs,
                        const TypeExpr* recvType, const std::vector<ArgSlot>& args,
                        std::vector<Diagnostic>& scratch, TypeExpr& result) {
        if (cand.params.size() != args.size()) return false;
        Binds b;
        if (!typeArgs.empty()) {
            if (typeArgs.size() != cand.typeParams.size()) return false;
            for (size_t i = 0; i < typeArgs.size(); ++i) b[cand.typeParams[i]] = typeArgs[i];
        }
        if (recvType) {
            if (!cand.receiver) return false;
            if (!accepts(*cand.receiver, *recvType, b)) return false;
        } else if (cand.receiver) {
            return false;
        }
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i].isLambda) {
                TypeExpr declP = subst(cand.params[i], b);
                if (declP.kind != TypeExpr::Kind::Function) return false;
                const Expr& lam = *args[i].expr;
                if (declP.args.size() != lam.params.size()) return false;
                std::map<std::string, TypeExpr> frame;
                bool bindable = true;
                for (size_t p = 0; p < lam.params.size(); ++p) {
                    TypeExpr want = subst(declP.args[p], b);
                    if (lam.params[p].declaredType) {
                        if (!accepts(want, *lam.params[p].declaredType, b)) {
                            bindable = false;
                            break;
                        }
                        want = *lam.params[p].declaredType;
                    } else if (hasVar(want)) {
                        bindable = false;  // cannot infer the parameter type
                        break;
                    }
                    frame[lam.params[p].name] = want;
                }
                if (!bindable) return false;
                scopes.push_back(std::move(frame));
                std::vector<Diagnostic>* saved = diags;
                diags = &scratch;
                TypeExpr bodyT = infer(*lam.a);
                diags = saved;
                scopes.pop_back();
                if (!unify(declP.ret[0], bodyT, b)) return false;
            } else {
                if (!accepts(cand.params[i], args[i].type, b)) return false;
            }
        }
        result = subst(cand.ret, b);
        return true;
    }

    std::string describeArgs(const std::vector<ArgSlot>& args) {
        std::string s = "(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) s += ", ";
            s += args[i].isLambda ? "<lambda>" : args[i].type.str();
        }
        s += ")";
        return s;
    }

    TypeExpr resolveOverloads(const std::string& shownName,
                              const std::vector<const FuncDecl*>& cands,
                              const std::vector<TypeExpr>& typeArgs, const TypeExpr* recvType,
                              const std::vector<ArgSlot>& args, SourceSpan sp) {
        bool anyArityMatch = false;
        for (const FuncDecl* cand : cands) {
            if (cand->params.size() == args.size()) anyArityMatch = true;
            std::vector<Diagnostic> scratch;
            TypeExpr result;
            if (matchCandidate(*cand, typeArgs, recvType, args, scratch, result)) {
                for (auto& d : scratch) diags->push_back(std::move(d));
                if (hasVar(result)) {
                    report(DiagKind::TypeMismatch, sp,
                           "cannot infer type arguments for '" + shownName + "'");
                    return TypeExpr::unknown();
                }
                return result;
            }
        }
        if (!anyArityMatch && !cands.empty()) {
            report(DiagKind::ArityMismatch, sp,
                   "'" + shownName + "' expects " +
                       std::to_string(cands.front()->params.size()) + " argument(s), got " +
                       std::to_string(args.size()));
        } else {
            report(DiagKind::TypeMismatch, sp,
                   "no matching signature for '" + shownName + "' with arguments " +
                       describeArgs(args));
        }
        return TypeExpr::unknown();
    }

    std::vector<ArgSlot> inferArgs(const std::vector<ExprPtr>& argExprs) {
        std::vector<ArgSlot> slots;
        slots.reserve(argExprs.size());
        for (const auto& a : argExprs) {
            ArgSlot s;
            s.expr = a.get();
            if (a->kind == Expr::Kind::Lambda) {
                s.isLambda = true;
                s.type = TypeExpr::unknown();
            } else {
                s.type = infer(*a);
            }
            slots.push_back(std::move(s));
        }
        return slots;
    }

    // ---- builtin collection/string members ----

    bool builtinMember(const TypeExpr& recv, const std::string& name, const Expr& node,
                       const std::vector<ArgSlot>& args, TypeExpr& out) {
        auto fail = [&](const std::string& msg) {
            report(DiagKind::TypeMismatch, node.span, msg);
            out = TypeExpr::unknown();
            return true;
        };
        if (recv.kind == TypeExpr::Kind::Named && recv.name == "List" && recv.args.size() == 1 &&
            sig.builtins.listMembers.count(name)) {
            const TypeExpr& elem = recv.args[0];
            if (name == "map" || name == "filter") {
                if (args.size() != 1)
                    return fail("'" + name + "' expects 1 argument");
                const ArgSlot& arg = args[0];
                if (arg.isLambda) {
                    const Expr& lam = *arg.expr;
                    if (lam.params.size() != 1)
                        return fail("'" + name + "' expects a one-parameter function");
                    TypeExpr paramT = elem;
                    if (lam.params[0].declaredType) {
                        if (!(*lam.params[0].declaredType == elem))
                            return fail("lambda parameter type " +
                                        lam.params[0].declaredType->str() +
                                        " does not match element type " + elem.str());
                    }
                    scopes.push_back({{lam.params[0].name, paramT}});
                    TypeExpr bodyT = infer(*lam.a);
                    scopes.pop_back();
                    if (name == "filter") {
                        if (!bodyT.isUnknown() && !bodyT.isNamed("Boolean"))
                            return fail("'filter' predicate must return Boolean, got " +
                                        bodyT.str());
                        out = recv;
                    } else {
                        out = bodyT.isUnknown() ? TypeExpr::unknown()
                                                : TypeExpr::named("List", {bodyT});
                    }
                    return true;
                }
                if (arg.type.isUnknown()) {
                    out = TypeExpr::unknown();
                    return true;
                }
                if (arg.type.kind != TypeExpr::Kind::Function || arg.type.args.size() != 1 ||
                    !(arg.type.args[0] == elem))
                    return fail("'" + name + "' expects a function over " + elem.str());
                if (name == "filter") {
                    if (!arg.type.ret[0].isNamed("Boolean"))
                        return fail("'filter' predicate must return Boolean");
                    out = recv;
                } else {
                    out = TypeExpr::named("List", {arg.type.ret[0]});
                }
                return true;
            }
            if (name == "take" || name == "drop") {
                if (args.size() != 1 || args[0].isLambda || !args[0].type.isNamed("Int"))
                    return fail("'" + name + "' expects an Int argument");
                out = recv;
                return true;
            }
            if (name == "contains") {
                if (args.size() != 1 || args[0].isLambda || !(args[0].type == elem))
                    return fail("'contains' expects an element of type " + elem.str());
                out = TypeExpr::named("Boolean");
                return true;
            }
            if (!args.empty()) return fail("'" + name + "' takes no arguments");
            if (name == "head" || name == "last") out = elem;
            else if (name == "size") out = TypeExpr::named("Int");
            else if (name == "nonEmpty" || name == "isEmpty") out = TypeExpr::named("Boolean");
            else out = recv;  // distinct
            return true;
        }
        if (recv.kind == TypeExpr::Kind::Named && recv.name == "Option" && recv.args.size() == 1 &&
            sig.builtins.optionMembers.count(name)) {
            const TypeExpr& elem = recv.args[0];
            if (name == "getOrElse") {
                if (args.size() != 1 || args[0].isLambda || !(args[0].type == elem))
                    return fail("'getOrElse' expects a default of type " + elem.str());
                out = elem;
                return true;
            }
            if (!args.empty()) return fail("'" + name + "' takes no arguments");
            if (name == "get") out = elem;
            else out = TypeExpr::named("Boolean");
            return true;
        }
        if (recv.isNamed("String") && sig.builtins.stringMembers.count(name)) {
            if (!args.empty()) return fail("'" + name + "' takes no arguments");
            out = name == "size" ? TypeExpr::named("Int") : TypeExpr::named("Boolean");
            return true;
        }
        return false;
    }

    // ---- identifier resolution ----

    TypeExpr resolveIdent(const Expr& e) {
        if (const TypeExpr* local = lookupLocal(e.name)) return *local;
        const std::string& canon = sig.canonicalName(e.name);
        auto it = sig.funcsByName.find(canon);
        if (it != sig.funcsByName.end()) {
            for (const FuncDecl* f : it->second) {
                if (f->params.empty()) {
                    if (!f->typeParams.empty() || hasVar(f->ret)) {
                        report(DiagKind::TypeMismatch, e.span,
                               "type arguments required for '" + e.name + "'");
                        return TypeExpr::unknown();
                    }
                    return f->ret;
                }
            }
            report(DiagKind::ArityMismatch, e.span,
                   "'" + e.name + "' expects " +
                       std::to_string(it->second.front()->params.size()) +
                       " argument(s), got none");
            return TypeExpr::unknown();
        }
        if (opts.allowFreeStepVars && isStepVarName(e.name)) return TypeExpr::unknown();
        if (isStepVarName(e.name)) {
            report(DiagKind::UnboundVariable, e.span,
                   "unbound step variable '" + e.name + "'");
        } else if (sig.isTypeName(e.name)) {
            report(DiagKind::TypeMismatch, e.span,
                   "'" + e.name + "' is a type, not a value");
        } else {
            report(DiagKind::UnknownFunction, e.span,
                   "unknown function or variable '" + e.name + "'");
        }
        return TypeExpr::unknown();
    }

    // Receiver of a member access: either a value or a type name (companion access).
    struct Receiver {
        bool isCompanion = false;
        std::string typeName;
        TypeExpr type;
    };

    Receiver resolveReceiver(const Expr& recv) {
        Receiver r;
        if (recv.kind == Expr::Kind::Ident && !lookupLocal(recv.name)) {
            const std::string& canon = sig.canonicalName(recv.name);
            bool hasNullary = false;
            auto it = sig.funcsByName.find(canon);
            if (it != sig.funcsByName.end())
                for (const FuncDecl* f : it->second)
                    if (f->params.empty() && f->typeParams.empty()) hasNullary = true;
            if (!hasNullary && sig.findType(recv.name)) {
                r.isCompanion = true;
                r.typeName = recv.name;
                return r;
            }
        }
        r.type = infer(recv);
        return r;
    }

    TypeExpr memberAccess(const Expr& e, const std::vector<ExprPtr>* argExprs) {
        Receiver recv = resolveReceiver(*e.a);
        std::vector<ArgSlot> args;
        if (argExprs) args = inferArgs(*argExprs);

        if (recv.isCompanion) {
            std::string dotted = recv.typeName + "." + e.name;
            auto it = sig.funcsByName.find(dotted);
            if (it == sig.funcsByName.end()) {
                report(DiagKind::UnknownFunction, e.span,
                       "'" + dotted + "' is not declared");
                return TypeExpr::unknown();
            }
            return resolveOverloads(dotted, it->second, e.typeArgs, nullptr, args, e.span);
        }

        if (recv.type.isUnknown()) return TypeExpr::unknown();

        TypeExpr out;
        if (e.typeArgs.empty() && builtinMember(recv.type, e.name, e, args, out)) return out;

        // declared instance fields (property access only)
        if (!argExprs && e.typeArgs.empty() && recv.type.kind == TypeExpr::Kind::Named) {
            if (const TypeDecl* td = sig.findType(recv.type.name)) {
                for (const auto& [fname, fty] : td->fields)
                    if (fname == e.name) return fty;
            }
        }

        const std::string& canon = sig.canonicalName(e.name);
        auto it = sig.extsByName.find(canon);
        if (it != sig.extsByName.end()) {
            return resolveOverloads(e.name, it->second, e.typeArgs, &recv.type, args, e.span);
        }
        report(DiagKind::UnknownFunction, e.span,
               "type " + recv.type.str() + " has no member '" + e.name + "'");
        return TypeExpr::unknown();
    }

    TypeExpr inferInfix(const Expr& e) {
        if (sig.builtins.booleanInfix.count(e.name)) {
            TypeExpr l = infer(*e.a);
            TypeExpr r = infer(*e.b);
            if ((!l.isUnknown() && !l.isNamed("Boolean")) ||
                (!r.isUnknown() && !r.isNamed("Boolean"))) {
                report(DiagKind::TypeMismatch, e.span,
                       "'" + e.name + "' expects Boolean operands");
                return TypeExpr::unknown();
            }
            return TypeExpr::named("Boolean");
        }
        const std::string& canon = sig.canonicalName(e.name);
        auto it = sig.extsByName.find(canon);
        if (it == sig.extsByName.end()) {
            infer(*e.a);
            infer(*e.b);
            report(DiagKind::UnknownFunction, e.span,
                   "unknown infix function '" + e.name + "'");
            return TypeExpr::unknown();
        }
        std::vector<const FuncDecl*> infixCands;
        for (const FuncDecl* f : it->second)
            if (f->infixAllowed) infixCands.push_back(f);
        if (infixCands.empty()) {
            infer(*e.a);
            infer(*e.b);
            report(DiagKind::UnknownFunction, e.span,
                   "'" + e.name + "' cannot be used as an infix operator");
            return TypeExpr::unknown();
        }
        TypeExpr recvT = infer(*e.a);
        ArgSlot slot;
        slot.expr = e.b.get();
        if (e.b->kind == Expr::Kind::Lambda) {
            slot.isLambda = true;
            slot.type = TypeExpr::unknown();
        } else {
            slot.type = infer(*e.b);
        }
        if (recvT.isUnknown() && slot.type.isUnknown()) return TypeExpr::unknown();
        return resolveOverloads(e.name, infixCands, {}, &recvT, {slot}, e.span);
    }

    TypeExpr inferCall(const Expr& e) {
        for (const auto& ta : e.typeArgs) validateTypeExpr(ta, e.span);
        const Expr& callee = *e.a;
        if (callee.kind == Expr::Kind::Ident && !lookupLocal(callee.name)) {
            if (callee.name == "List") {
                report(DiagKind::UnknownFunction, e.span,
                       "'List' literal requires exactly one element type");
                if (e.hasArgList) inferArgs(e.args);
                return TypeExpr::unknown();
            }
            const std::string& canon = sig.canonicalName(callee.name);
            auto it = sig.funcsByName.find(canon);
            if (it == sig.funcsByName.end()) {
                if (e.hasArgList) inferArgs(e.args);
                if (sig.isTypeName(callee.name)) {
                    report(DiagKind::UnknownFunction, e.span,
                           "type '" + callee.name + "' has no constructor function");
                } else {
                    report(DiagKind::UnknownFunction, e.span,
                           "unknown function '" + callee.name + "'");
                }
                return TypeExpr::unknown();
            }
            std::vector<ArgSlot> args;
            if (e.hasArgList) args = inferArgs(e.args);
            return resolveOverloads(callee.name, it->second, e.typeArgs, nullptr, args, e.span);
        }
        // value in function position
        TypeExpr calleeT = infer(callee);
        std::vector<ArgSlot> args;
        if (e.hasArgList) args = inferArgs(e.args);
        if (calleeT.isUnknown()) return TypeExpr::unknown();
        if (calleeT.kind != TypeExpr::Kind::Function) {
            report(DiagKind::TypeMismatch, e.span,
                   "expression of type " + calleeT.str() + " is not callable");
            return TypeExpr::unknown();
        }
        if (calleeT.args.size() != args.size()) {
            report(DiagKind::ArityMismatch, e.span,
                   "function expects " + std::to_string(calleeT.args.size()) +
                       " argument(s), got " + std::to_string(args.size()));
            return TypeExpr::unknown();
        }
        Binds b;
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i].isLambda) {
                report(DiagKind::TypeMismatch, e.span, "lambda argument not expected here");
                return TypeExpr::unknown();
            }
            if (!accepts(calleeT.args[i], args[i].type, b)) {
                report(DiagKind::TypeMismatch, e.span,
                       "argument " + std::to_string(i + 1) + " has type " +
                           args[i].type.str() + ", expected " + calleeT.args[i].str());
                return TypeExpr::unknown();
            }
        }
        return calleeT.ret[0];
    }

    TypeExpr infer(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Ident:
                return resolveIdent(e);
            case Expr::Kind::StringLit:
                return TypeExpr::named("String");
            case Expr::Kind::IntLit:
                return TypeExpr::named("Int");
            case Expr::Kind::DecimalLit:
                return TypeExpr::named("Decimal");
            case Expr::Kind::Call:
                return inferCall(e);
            case Expr::Kind::FieldAccess:
                return memberAccess(e, nullptr);
            case Expr::Kind::MethodCall:
                return memberAccess(e, e.hasArgList ? &e.args : nullptr);
            case Expr::Kind::Infix:
                return inferInfix(e);
            case Expr::Kind::Lambda: {
                // lambdas only type-check where an expected function type exists,
                // unless every parameter is annotated
                std::map<std::string, TypeExpr> frame;
                for (const auto& p : e.params) {
                    if (!p.declaredType) {
                        report(DiagKind::TypeMismatch, e.span,
                               "cannot infer type of lambda parameter '" + p.name + "'");
                        return TypeExpr::unknown();
                    }
                    validateTypeExpr(*p.declaredType, e.span);
                    frame[p.name] = *p.declaredType;
                }
                scopes.push_back(std::move(frame));
                TypeExpr bodyT = infer(*e.a);
                scopes.pop_back();
                std::vector<TypeExpr> params;
                for (const auto& p : e.params) params.push_back(*p.declaredType);
                return TypeExpr::func(std::move(params), std::move(bodyT));
            }
            case Expr::Kind::ListLit: {
                validateTypeExpr(e.typeArgs[0], e.span);
                const TypeExpr& elem = e.typeArgs[0];
                for (const auto& el : e.args) {
                    TypeExpr t =
                        el->kind == Expr::Kind::Lambda ? TypeExpr::unknown() : infer(*el);
                    if (el->kind == Expr::Kind::Lambda) {
                        report(DiagKind::TypeMismatch, el->span,
                               "lambda element not supported in list literal");
                        continue;
                    }
                    if (!t.isUnknown() && !(t == elem) && !convertible(t, elem)) {
                        report(DiagKind::TypeMismatch, el->span,
                               "list element has type " + t.str() + ", expected " + elem.str());
                    }
                }
                return TypeExpr::named("List", {elem});
            }
            case Expr::Kind::Conditional: {
                TypeExpr condT = infer(*e.a);
                if (!condT.isUnknown() && !condT.isNamed("Boolean")) {
                    report(DiagKind::TypeMismatch, e.a->span,
                           "condition must be Boolean, got " + condT.str());
                }
                TypeExpr t1 = infer(*e.b);
                TypeExpr t2 = infer(*e.c);
                if (t1.isUnknown()) return t2;
                if (t2.isUnknown()) return t1;
                if (t1 == t2) return t1;
                if (convertible(t1, t2)) return t2;
                if (convertible(t2, t1)) return t1;
                report(DiagKind::TypeMismatch, e.span,
                       "conditional branches have types " + t1.str() + " and " + t2.str());
                return TypeExpr::unknown();
            }
        }
        return TypeExpr::unknown();
    }
};

}  // namespace

CheckResult checkProgram(const Program& prog, const DomainSignature& sig,
                         const CheckOptions& opts) {
    CheckResult res;
    Checker ck{sig, opts, &res.diagnostics, {}, {}};
    for (const Fragment& frag : prog.fragments) {
        if (frag.declaredType) ck.validateTypeExpr(*frag.declaredType, frag.span);
        TypeExpr t = ck.infer(*frag.expr);
        if (frag.declaredType) {
            const TypeExpr& want = *frag.declaredType;
            if (!t.isUnknown() && !(t == want) && !ck.convertible(t, want)) {
                ck.report(DiagKind::TypeMismatch, frag.span,
                          "declared type " + want.str() + " but expression has type " +
                              t.str());
            }
            t = want;
        }
        if (ck.stepVars.count(frag.varName)) {
            ck.report(DiagKind::Syntax, frag.span,
                      "step variable '" + frag.varName + "' bound more than once");
        }
        ck.stepVars[frag.varName] = t;
        res.fragmentTypes.push_back(std::move(t));
    }
    res.ok = res.diagnostics.empty();
    return res;
}

WellFormResult wellFormText(const std::string& text, const DomainSignature& sig,
                            FreeVarPolicy policy) {
    WellFormResult out;
    ParseResult pr = parseProgram(text);
    if (!pr.ok) {
        out.diagnostics = std::move(pr.diagnostics);
        return out;
    }
    out.parsed = true;
    CheckOptions opts;
    switch (policy) {
        case FreeVarPolicy::Strict: opts.allowFreeStepVars = false; break;
        case FreeVarPolicy::AllowFree: opts.allowFreeStepVars = true; break;
        case FreeVarPolicy::SingleFragmentLenient:
            opts.allowFreeStepVars = pr.program.fragments.size() == 1;
            break;
    }
    CheckResult cr = checkProgram(pr.program, sig, opts);
    out.ok = cr.ok;
    out.diagnostics = std::move(cr.diagnostics);
    return out;
}

}  // namespace domainlang
