#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dataset {

struct ElementaryExample {
    std::string utterance;  // the user request x
    std::string program;    // single `val` binding in canonical form
};

struct DecompStep {
    std::string nl;        // natural-language step
    std::string fragment;  // one `val sj = ...` binding
};

enum class Source { Human, Generated };

const char* sourceName(Source s);
Source sourceFromName(const std::string& name);

struct ComplexExample {
    std::string utterance;
    std::vector<DecompStep> steps;
    Source source = Source::Human;

    // Fragments joined with newlines: the gold multi-line program.
    std::string fullProgram() const;
};

inline constexpr int kMaxSteps = 8;

struct SplitSpec {
    uint64_t seed = 0;
    double train = 0.70;
    double dev = 0.15;
    double test = 0.15;

    void validate() const;  // ratios must sum to 1 within 1e-9
};

}  // namespace dataset
