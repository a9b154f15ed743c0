#pragma once

#include <map>
#include <string>
#include <vector>

#include "domainlang/ast.hpp"
#include "domainlang/signature.hpp"

namespace domainlang {

struct CheckOptions {
    // When set, references to step variables (s, s1, s2, ...) that are not
    // bound inside the program are treated as values of unknown type. Used
    // for elementary examples, which are fragments-in-context by convention.
    bool allowFreeStepVars = false;
};

struct CheckResult {
    bool ok = false;
    std::vector<Diagnostic> diagnostics;
    std::vector<TypeExpr> fragmentTypes;  // one entry per fragment (Unknown on error)
};

CheckResult checkProgram(const Program& prog, const DomainSignature& sig,
                         const CheckOptions& opts = {});

enum class FreeVarPolicy {
    Strict,                 // every referenced variable must be bound in the program
    AllowFree,              // free step variables allowed everywhere
    SingleFragmentLenient,  // free step variables allowed only in 1-fragment programs
};

struct WellFormResult {
    bool parsed = false;
    bool ok = false;
    std::vector<Diagnostic> diagnostics;
};

// Parse + check in one step; the WellForm judgment over raw text.
WellFormResult wellFormText(const std::string& text, const DomainSignature& sig,
                            FreeVarPolicy policy = FreeVarPolicy::SingleFragmentLenient);

// True for names of the step-variable shape: s, s1, s2, ...
bool isStepVarName(const std::string& name);

}  // namespace domainlang
