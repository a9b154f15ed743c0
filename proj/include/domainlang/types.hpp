#pragma once

#include <string>
#include <vector>

namespace domainlang {

// Type expression for the DSL: named types (possibly parameterized),
// function types, type variables, plus an Unknown used for recovery.
struct TypeExpr {
    enum class Kind { Named, Function, Var, Unknown };

    Kind kind = Kind::Unknown;
    std::string name;             // Named / Var
    std::vector<TypeExpr> args;   // Named: type arguments; Function: parameter types
    std::vector<TypeExpr> ret;    // Function: single-element return type

    static TypeExpr named(std::string n, std::vector<TypeExpr> as = {}) {
        TypeExpr t;
        t.kind = Kind::Named;
        t.name = std::move(n);
        t.args = std::move(as);
        return t;
    }
    static TypeExpr func(std::vector<TypeExpr> params, TypeExpr result) {
        TypeExpr t;
        t.kind = Kind::Function;
        t.args = std::move(params);
        t.ret.push_back(std::move(result));
        return t;
    }
    static TypeExpr var(std::string n) {
        TypeExpr t;
        t.kind = Kind::Var;
        t.name = std::move(n);
        return t;
    }
    static TypeExpr unknown() { return TypeExpr{}; }

    bool isUnknown() const { return kind == Kind::Unknown; }
    bool isNamed(const std::string& n) const { return kind == Kind::Named && name == n; }

    bool operator==(const TypeExpr& o) const;
    bool operator!=(const TypeExpr& o) const { return !(*this == o); }

    std::string str() const;
};

}  // namespace domainlang
