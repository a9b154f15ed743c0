#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dataset/model.hpp"
#include "domainlang/signature.hpp"
#include "llm/backend.hpp"

namespace dataset {

// Deterministic seeded shuffle (Fisher-Yates over mt19937_64); identical
// output across platforms for the same seed.
std::vector<size_t> shuffledIndices(size_t n, uint64_t seed);

struct Split {
    std::vector<ElementaryExample> train;
    std::vector<ElementaryExample> dev;
    std::vector<ElementaryExample> test;
};

// Floor-allocated split sizes with the remainder assigned to train.
Split splitElementary(const std::vector<ElementaryExample>& examples, const SplitSpec& spec);

struct StatsReport {
    size_t count = 0;
    std::optional<double> meanSteps;
    int maxSteps = 0;
    std::optional<double> meanTokensPerProgram;   // counted tokens, full program
    std::optional<double> meanTokensPerFragment;  // counted tokens per fragment
    std::map<std::string, int> propertyCounts;    // examples exhibiting each property
};

// Names whose presence (as counted tokens) marks a program property.
std::map<std::string, std::vector<std::string>> defaultPropertyNames();

StatsReport datasetStats(
    const std::vector<ComplexExample>& complex,
    const std::map<std::string, std::vector<std::string>>& propertyNames =
        defaultPropertyNames());

std::string statsToJson(const StatsReport& r);

// Canonicalizes every fragment (normalizeProgram) and renames step variables
// to sequential s1..sN. Throws with the offending example index on parse
// failure.
std::vector<ComplexExample> normalizeAnnotations(const std::vector<ComplexExample>& raw,
                                                 const domainlang::DomainSignature& sig);

struct BootstrapOptions {
    int count = 10;
    double temperature = 0.8;
    uint64_t seed = 0;
    int maxTokens = 64;
    std::string model;
    int maxAttemptsPerUtterance = 8;
};

// Renders the utterance-generation prompt: ten sampled seed utterances plus
// the fixed instruction line, ending with a trailing newline cue.
std::string buildBootstrapPrompt(const std::vector<std::string>& seedUtterances, uint64_t seed);

// Samples `count` novel utterances, deduplicated case-insensitively against
// the seeds and each other. Throws when the backend keeps repeating itself.
std::vector<std::string> bootstrapUtterances(const std::vector<std::string>& seedUtterances,
                                             llm::CompletionBackend& backend,
                                             const BootstrapOptions& opts);

// Keyword sampler used to prompt human authors of complex utterances.
std::vector<std::string> sampleKeywords(const std::vector<std::string>& keywords, int count,
                                        uint64_t seed);

}  // namespace dataset
