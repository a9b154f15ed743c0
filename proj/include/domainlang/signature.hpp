#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "domainlang/types.hpp"

namespace domainlang {

struct TypeDecl {
    std::string name;
    int arity = 0;
    std::vector<std::pair<std::string, TypeExpr>> fields;
    int line = 0;
};

struct FuncDecl {
    std::string name;                   // may be dotted for companion members (Type.member)
    std::vector<std::string> typeParams;
    std::optional<TypeExpr> receiver;   // set for extension methods
    std::vector<TypeExpr> params;
    TypeExpr ret;
    bool infixAllowed = false;
    int line = 0;

    bool isExtension() const { return receiver.has_value(); }
};

struct Conversion {
    TypeExpr from;
    TypeExpr to;
    int line = 0;
};

class SignatureError : public std::runtime_error {
  public:
    SignatureError(const std::string& origin, int line, const std::string& what)
        : std::runtime_error(origin + ":" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Names usable without declaration: builtin types plus value/collection
// operations handled structurally by the checker.
struct Builtins {
    std::set<std::string> types{"String", "Boolean", "Int", "Decimal", "Unit", "List", "Option"};
    std::set<std::string> listMembers{"map",  "filter",   "head",    "last",
                                      "size", "nonEmpty", "isEmpty", "distinct",
                                      "take", "drop",     "contains"};
    std::set<std::string> optionMembers{"get", "isDefined", "isEmpty", "getOrElse"};
    std::set<std::string> stringMembers{"nonEmpty", "isEmpty", "size"};
    std::set<std::string> booleanInfix{"||", "&&"};

    int typeArity(const std::string& name) const {
        return (name == "List" || name == "Option") ? 1 : 0;
    }
};

struct DomainSignature {
    std::vector<TypeDecl> types;
    std::vector<FuncDecl> functions;
    std::vector<Conversion> conversions;
    std::map<std::string, std::set<std::string>> aliases;  // canonical -> surfaces
    Builtins builtins;

    // derived lookups, built by finalize()
    std::map<std::string, const TypeDecl*> typeByName;
    std::map<std::string, std::vector<const FuncDecl*>> funcsByName;  // plain + dotted
    std::map<std::string, std::vector<const FuncDecl*>> extsByName;
    std::map<std::string, std::string> aliasToCanonical;

    DomainSignature() = default;
    DomainSignature(const DomainSignature&) = delete;
    DomainSignature& operator=(const DomainSignature&) = delete;
    DomainSignature(DomainSignature&&) = default;
    DomainSignature& operator=(DomainSignature&&) = default;

    // Builds lookup tables and validates invariants (throws SignatureError).
    // Lookup tables point into the declaration vectors; run again after copying.
    void finalize(const std::string& origin = "signature");

    const TypeDecl* findType(const std::string& name) const;
    bool isTypeName(const std::string& name) const;
    // Resolves aliases to canonical names; returns the input when not aliased.
    const std::string& canonicalName(const std::string& name) const;

    size_t functionCount() const { return functions.size(); }
    size_t typeCount() const { return types.size(); }
};

DomainSignature parseSignatureText(const std::string& text, const std::string& originName);
DomainSignature loadSignature(const std::filesystem::path& path);

}  // namespace domainlang
