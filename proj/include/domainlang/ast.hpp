#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "domainlang/diagnostic.hpp"
#include "domainlang/types.hpp"

namespace domainlang {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct LambdaParam {
    std::string name;
    std::optional<TypeExpr> declaredType;
    int nameTokenIndex = -1;
};

// One expression node. Which fields are meaningful depends on kind:
//   Ident       name
//   StringLit   strValue (decoded), litText (raw lexeme)
//   IntLit      litText
//   DecimalLit  litText
//   Call        callee=a, typeArgs, args (hasArgList=false for bare `next[T]`)
//   FieldAccess a (receiver), name
//   MethodCall  a (receiver), name, typeArgs, args
//   Infix       a (left), name (operator), b (right)
//   Lambda      params, a (body)
//   ListLit     elemType (single entry in typeArgs), args (elements)
//   Conditional a (cond), b (then), c (else)
struct Expr {
    enum class Kind {
        Ident,
        StringLit,
        IntLit,
        DecimalLit,
        Call,
        FieldAccess,
        MethodCall,
        Infix,
        Lambda,
        ListLit,
        Conditional,
    };

    Kind kind = Kind::Ident;
    SourceSpan span;

    std::string name;
    std::string strValue;
    std::string litText;
    ExprPtr a, b, c;
    std::vector<ExprPtr> args;
    std::vector<TypeExpr> typeArgs;
    std::vector<LambdaParam> params;
    bool hasArgList = false;

    // Token indices into the program token stream covered by this node's
    // identifier/name token (used by the token-level normalizer). -1 if none.
    int nameTokenIndex = -1;

    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }
};

ExprPtr cloneExpr(const Expr& e);

struct Fragment {
    std::string varName;                    // step variable, e.g. s, s1, s2
    std::optional<TypeExpr> declaredType;   // value-level ascription, if present
    ExprPtr expr;
    std::string sourceText;                 // canonical one-line text of the binding
    SourceSpan span;

    int varTokenIndex = -1;                 // token index of the bound name
    int ascriptionBegin = -1;               // token range [begin, end) of `: Type`, or -1
    int ascriptionEnd = -1;
    int tokenBegin = 0;                     // token range [begin, end) of the fragment
    int tokenEnd = 0;
};

struct Program {
    std::vector<Fragment> fragments;

    bool operator==(const Program& o) const;
    bool operator!=(const Program& o) const { return !(*this == o); }
};

}  // namespace domainlang
