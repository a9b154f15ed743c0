#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset/model.hpp"
#include "domainlang/signature.hpp"

namespace promptkit {

enum class SelectionKind { Bm25, Random };

struct ExemplarSelection {
    SelectionKind kind = SelectionKind::Bm25;
    uint64_t seed = 0;  // Random mode only
};

struct PromptConfig {
    int m = 20;  // max elementary exemplars in the prompt
    int k = 10;  // decomposition exemplars in the prompt
    bool includeElementary = true;
    ExemplarSelection selection;
    size_t charBudget = 0;  // 0 = unlimited; otherwise blocks are dropped to fit
    std::string header;     // optional instruction header; none by default

    // When set, every exemplar program is checked at build time.
    const domainlang::DomainSignature* checkSig = nullptr;
};

struct Prompt {
    std::string text;  // ends with the cue line, no trailing newline
    std::vector<std::string> stopSequences;
};

struct RankedExemplar {
    dataset::ElementaryExample example;
    double score = 0.0;
};

inline constexpr const char* kEos = "<EOS>";

// Prompt asking for the next NL step: elementary blocks, decomposition
// blocks, then the test block ending with the cue `Step <j>:`.
Prompt buildDecompositionPrompt(const std::string& utterance,
                                const std::vector<dataset::DecompStep>& priorSteps,
                                const std::vector<RankedExemplar>& elementary,
                                const std::vector<dataset::ComplexExample>& decompExemplars,
                                const PromptConfig& cfg);

// Prompt asking for the program fragment of the current step; the test block
// echoes `Step <j>: <currentStep>` and ends with the cue `Program <j>:`.
Prompt buildStepParsePrompt(const std::string& utterance,
                            const std::vector<dataset::DecompStep>& priorSteps,
                            const std::string& currentStep,
                            const std::vector<RankedExemplar>& elementary,
                            const std::vector<dataset::ComplexExample>& decompExemplars,
                            const PromptConfig& cfg);

// Single-shot prompt: complex exemplars carry full multi-line programs and no
// NL steps; cue is `Utterance: <x>\nProgram:`.
Prompt buildDirectPrompt(const std::string& utterance,
                         const std::vector<RankedExemplar>& elementary,
                         const std::vector<dataset::ComplexExample>& complexExemplars,
                         const PromptConfig& cfg);

}  // namespace promptkit
