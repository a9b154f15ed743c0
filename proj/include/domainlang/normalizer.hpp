#pragma once

#include <string>

#include "domainlang/signature.hpp"

namespace domainlang {

// Canonical form: comments stripped, whitespace normalized (one fragment per
// line, single spaces), alias names replaced by canonical names, value-level
// type ascriptions removed where inference re-derives the same type.
// Total and idempotent; unparseable input gets whitespace/comment
// normalization only.
std::string normalizeProgram(const std::string& text, const DomainSignature& sig);

// Renames step variables (binders and their references) to sequential s1..sN.
// Unparseable input is returned unchanged.
std::string renameStepVars(const std::string& text);

// normalize + sequential renaming; the form compared by exact-match scoring.
std::string canonicalForComparison(const std::string& text, const DomainSignature& sig);

struct FragmentRepair {
    bool parsed = false;
    std::string text;    // repaired fragment (input text when unparseable)
    std::string oldVar;  // original binder name
};

// Repairs a single generated fragment: free-variable references are renamed
// through priorRenames, then the binder is renamed to canonicalVar.
FragmentRepair repairFragmentBinding(const std::string& fragmentText,
                                     const std::string& canonicalVar,
                                     const std::map<std::string, std::string>& priorRenames);

}  // namespace domainlang
