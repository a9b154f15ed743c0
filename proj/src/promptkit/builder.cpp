#include "promptkit/builder.hpp"

#include <numeric>
#include <stdexcept>

#include "evalkit/metrics.hpp"

namespace promptkit {

namespace {

void checkExemplarProgram(const PromptConfig& cfg, const std::string& program,
                          const std::string& what) {
    if (!cfg.checkSig) return;
    if (!evalkit::wellFormed(program, *cfg.checkSig))
        throw std::invalid_argument("exemplar program in " + what +
                                    " block is not well-formed: " + program);
}

std::string elementaryBlock(const dataset::ElementaryExample& e) {
    return "Utterance: " + e.utterance + "\nProgram: " + e.program + "\n" + kEos + "\n\n";
}

std::string decompositionBlock(const dataset::ComplexExample& e) {
    std::string out = "Utterance: " + e.utterance + "\n";
    for (size_t j = 0; j < e.steps.size(); ++j) {
        std::string n = std::to_string(j + 1);
        out += "Step " + n + ": " + e.steps[j].nl + "\n";
        out += "Program " + n + ": " + e.steps[j].fragment + "\n";
    }
    out += kEos;
    out += "\n\n";
    return out;
}

std::string directBlock(const dataset::ComplexExample& e) {
    std::string out = "Utterance: " + e.utterance + "\nProgram: ";
    for (size_t j = 0; j < e.steps.size(); ++j) {
        if (j) out += '\n';
        out += e.steps[j].fragment;
    }
    out += "\n";
    out += kEos;
    out += "\n\n";
    return out;
}

std::string testBlockPriors(const std::string& utterance,
                            const std::vector<dataset::DecompStep>& priorSteps) {
    std::string out = "Utterance: " + utterance + "\n";
    for (size_t j = 0; j < priorSteps.size(); ++j) {
        std::string n = std::to_string(j + 1);
        out += "Step " + n + ": " + priorSteps[j].nl + "\n";
        out += "Program " + n + ": " + priorSteps[j].fragment + "\n";
    }
    return out;
}

// Assembles header + exemplar blocks + test block, dropping blocks to fit the
// character budget: lowest-scored elementary first, then trailing
// decomposition blocks.
std::string assemble(const PromptConfig& cfg, const std::vector<std::string>& elementaryBlocks,
                     const std::vector<std::string>& exemplarBlocks,
                     const std::string& testBlock) {
    size_t keepElementary = elementaryBlocks.size();
    size_t keepExemplars = exemplarBlocks.size();

    auto totalSize = [&]() {
        size_t total = cfg.header.empty() ? 0 : cfg.header.size() + 2;
        for (size_t i = 0; i < keepElementary; ++i) total += elementaryBlocks[i].size();
        for (size_t i = 0; i < keepExemplars; ++i) total += exemplarBlocks[i].size();
        return total + testBlock.size();
    };
    if (cfg.charBudget > 0) {
        while (totalSize() > cfg.charBudget && keepElementary > 0) --keepElementary;
        while (totalSize() > cfg.charBudget && keepExemplars > 0) --keepExemplars;
    }

    std::string out;
    if (!cfg.header.empty()) {
        out += cfg.header;
        out += "\n\n";
    }
    for (size_t i = 0; i < keepElementary; ++i) out += elementaryBlocks[i];
    for (size_t i = 0; i < keepExemplars; ++i) out += exemplarBlocks[i];
    out += testBlock;
    return out;
}

std::vector<std::string> renderElementary(const std::vector<RankedExemplar>& elementary,
                                          const PromptConfig& cfg) {
    std::vector<std::string> blocks;
    if (!cfg.includeElementary || cfg.m <= 0) return blocks;
    size_t cap = static_cast<size_t>(cfg.m);
    for (const auto& r : elementary) {
        if (blocks.size() >= cap) break;
        checkExemplarProgram(cfg, r.example.program, "elementary");
        blocks.push_back(elementaryBlock(r.example));
    }
    return blocks;
}

std::vector<std::string> renderDecomp(const std::vector<dataset::ComplexExample>& decomp,
                                      const PromptConfig& cfg) {
    std::vector<std::string> blocks;
    size_t cap = cfg.k < 0 ? 0 : static_cast<size_t>(cfg.k);
    for (const auto& e : decomp) {
        if (blocks.size() >= cap) break;
        checkExemplarProgram(cfg, e.fullProgram(), "decomposition");
        blocks.push_back(decompositionBlock(e));
    }
    return blocks;
}

}  // namespace

Prompt buildDecompositionPrompt(const std::string& utterance,
                                const std::vector<dataset::DecompStep>& priorSteps,
                                const std::vector<RankedExemplar>& elementary,
                                const std::vector<dataset::ComplexExample>& decompExemplars,
                                const PromptConfig& cfg) {
    std::string test = testBlockPriors(utterance, priorSteps);
    test += "Step " + std::to_string(priorSteps.size() + 1) + ":";
    Prompt p;
    p.text = assemble(cfg, renderElementary(elementary, cfg), renderDecomp(decompExemplars, cfg),
                      test);
    p.stopSequences = {"\n"};
    return p;
}

Prompt buildStepParsePrompt(const std::string& utterance,
                            const std::vector<dataset::DecompStep>& priorSteps,
                            const std::string& currentStep,
                            const std::vector<RankedExemplar>& elementary,
                            const std::vector<dataset::ComplexExample>& decompExemplars,
                            const PromptConfig& cfg) {
    if (currentStep.empty()) throw std::invalid_argument("current step must be non-empty");
    std::string n = std::to_string(priorSteps.size() + 1);
    std::string test = testBlockPriors(utterance, priorSteps);
    test += "Step " + n + ": " + currentStep + "\n";
    test += "Program " + n + ":";
    Prompt p;
    p.text = assemble(cfg, renderElementary(elementary, cfg), renderDecomp(decompExemplars, cfg),
                      test);
    p.stopSequences = {"\n", kEos};
    return p;
}

Prompt buildDirectPrompt(const std::string& utterance,
                         const std::vector<RankedExemplar>& elementary,
                         const std::vector<dataset::ComplexExample>& complexExemplars,
                         const PromptConfig& cfg) {
    std::vector<std::string> blocks;
    size_t cap = cfg.k < 0 ? 0 : static_cast<size_t>(cfg.k);
    for (const auto& e : complexExemplars) {
        if (blocks.size() >= cap) break;
        checkExemplarProgram(cfg, e.fullProgram(), "direct");
        blocks.push_back(directBlock(e));
    }
    std::string test = "Utterance: " + utterance + "\nProgram:";
    Prompt p;
    p.text = assemble(cfg, renderElementary(elementary, cfg), blocks, test);
    p.stopSequences = {kEos};
    return p;
}

}  // namespace promptkit
