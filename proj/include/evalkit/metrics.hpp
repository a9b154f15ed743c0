#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domainlang/signature.hpp"

namespace evalkit {

// 1 iff the two programs are string-equal after canonical normalization and
// sequential step-variable renaming on both sides.
int exactMatch(const std::string& pred, const std::string& gold,
               const domainlang::DomainSignature& sig);

// Plain byte-equality exact match, reported alongside for comparison.
int exactMatchRaw(const std::string& pred, const std::string& gold);

// Unnormalized character-level Levenshtein distance.
size_t levenshtein(const std::string& a, const std::string& b);

// Normalized character edit distance in [0,1]: Levenshtein over the
// canonicalized strings divided by max length; 0 when both are empty.
double charEditDistance(const std::string& pred, const std::string& gold,
                        const domainlang::DomainSignature& sig);

// 1 iff the prediction parses and type-checks against the signature. Free
// step variables are tolerated in single-fragment programs only.
int wellFormed(const std::string& pred, const domainlang::DomainSignature& sig);

}  // namespace evalkit
