#include "dataset/ops.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "domainlang/normalizer.hpp"
#include "domainlang/parser.hpp"
#include "domainlang/token.hpp"

namespace dataset {

using nlohmann::json;

std::vector<size_t> shuffledIndices(size_t n, uint64_t seed) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (size_t i = n; i > 1; --i) {
        size_t j = static_cast<size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

Split splitElementary(const std::vector<ElementaryExample>& examples, const SplitSpec& spec) {
    spec.validate();
    if (examples.size() < 3)
        throw std::invalid_argument("need at least 3 examples to split, got " +
                                    std::to_string(examples.size()));
    const size_t n = examples.size();
    size_t nDev = static_cast<size_t>(static_cast<double>(n) * spec.dev);
    size_t nTest = static_cast<size_t>(static_cast<double>(n) * spec.test);
    size_t nTrain = n - nDev - nTest;  // remainder goes to train

    std::vector<size_t> order = shuffledIndices(n, spec.seed);
    Split out;
    out.train.reserve(nTrain);
    out.dev.reserve(nDev);
    out.test.reserve(nTest);
    for (size_t i = 0; i < n; ++i) {
        const ElementaryExample& e = examples[order[i]];
        if (i < nTrain) out.train.push_back(e);
        else if (i < nTrain + nDev) out.dev.push_back(e);
        else out.test.push_back(e);
    }
    return out;
}

std::map<std::string, std::vector<std::string>> defaultPropertyNames() {
    return {
        {"map", {"map"}},
        {"conditional", {"if"}},
        {"filter", {"filter"}},
        {"query", {"findEvents", "findEvents0", "findEmails", "theEvent", "theEmail",
                   "findPeople", "availabilityIncludingMe"}},
        {"create", {"createEvent", "sendEmail"}},
        {"delete", {"deleteEvent", "deleteEmail", "cancelEvent", "declineEvent"}},
        {"modify", {"modifyEvent", "moveEvent", "respond"}},
    };
}

namespace {

size_t countedTokens(const std::string& text) {
    size_t n = 0;
    for (const auto& t : domainlang::tokenizeProgram(text))
        if (domainlang::isCountedToken(t)) ++n;
    return n;
}

}  // namespace

StatsReport datasetStats(const std::vector<ComplexExample>& complex,
                         const std::map<std::string, std::vector<std::string>>& propertyNames) {
    StatsReport r;
    r.count = complex.size();
    for (const auto& [prop, names] : propertyNames) {
        (void)names;
        r.propertyCounts[prop] = 0;
    }
    if (complex.empty()) return r;

    double stepSum = 0;
    double programTokenSum = 0;
    double fragmentTokenSum = 0;
    size_t fragmentCount = 0;
    for (const auto& e : complex) {
        stepSum += static_cast<double>(e.steps.size());
        r.maxSteps = std::max(r.maxSteps, static_cast<int>(e.steps.size()));
        programTokenSum += static_cast<double>(countedTokens(e.fullProgram()));
        for (const auto& s : e.steps) {
            fragmentTokenSum += static_cast<double>(countedTokens(s.fragment));
            ++fragmentCount;
        }
        std::set<std::string> names;
        for (const auto& t : domainlang::tokenizeProgram(e.fullProgram()))
            if (domainlang::isCountedToken(t)) names.insert(t.identName());
        for (const auto& [prop, keys] : propertyNames) {
            bool hit = std::any_of(keys.begin(), keys.end(),
                                   [&](const std::string& k) { return names.count(k) > 0; });
            if (hit) ++r.propertyCounts[prop];
        }
    }
    double n = static_cast<double>(complex.size());
    r.meanSteps = stepSum / n;
    r.meanTokensPerProgram = programTokenSum / n;
    if (fragmentCount > 0)
        r.meanTokensPerFragment = fragmentTokenSum / static_cast<double>(fragmentCount);
    return r;
}

std::string statsToJson(const StatsReport& r) {
    json j;
    j["count"] = r.count;
    if (r.meanSteps) j["meanSteps"] = *r.meanSteps;
    j["maxSteps"] = r.maxSteps;
    if (r.meanTokensPerProgram) j["meanTokensPerProgram"] = *r.meanTokensPerProgram;
    if (r.meanTokensPerFragment) j["meanTokensPerFragment"] = *r.meanTokensPerFragment;
    j["propertyCounts"] = r.propertyCounts;
    return j.dump(2);
}

std::vector<ComplexExample> normalizeAnnotations(const std::vector<ComplexExample>& raw,
                                                 const domainlang::DomainSignature& sig) {
    std::vector<ComplexExample> out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        const ComplexExample& e = raw[i];
        ComplexExample norm;
        norm.utterance = e.utterance;
        norm.source = e.source;

        std::string joined;
        for (size_t j = 0; j < e.steps.size(); ++j) {
            std::string frag = domainlang::normalizeProgram(e.steps[j].fragment, sig);
            domainlang::ParseResult pr = domainlang::parseProgram(frag);
            if (!pr.ok || pr.program.fragments.size() != 1)
                throw std::runtime_error("example " + std::to_string(i) + " step " +
                                         std::to_string(j + 1) + ": fragment does not parse");
            if (j) joined += '\n';
            joined += frag;
        }
        std::string renamed = domainlang::renameStepVars(joined);
        std::vector<std::string> lines;
        size_t start = 0;
        while (start <= renamed.size()) {
            size_t nl = renamed.find('\n', start);
            if (nl == std::string::npos) {
                lines.push_back(renamed.substr(start));
                break;
            }
            lines.push_back(renamed.substr(start, nl - start));
            start = nl + 1;
        }
        if (lines.size() != e.steps.size())
            throw std::runtime_error("example " + std::to_string(i) +
                                     ": fragment count changed during normalization");
        for (size_t j = 0; j < e.steps.size(); ++j)
            norm.steps.push_back(DecompStep{e.steps[j].nl, lines[j]});
        out.push_back(std::move(norm));
    }
    return out;
}

std::string buildBootstrapPrompt(const std::vector<std::string>& seedUtterances, uint64_t seed) {
    if (seedUtterances.size() < 10)
        throw std::invalid_argument("need at least 10 seed utterances, got " +
                                    std::to_string(seedUtterances.size()));
    std::vector<size_t> order = shuffledIndices(seedUtterances.size(), seed);
    std::string prompt;
    for (size_t i = 0; i < 10; ++i) {
        prompt += seedUtterances[order[i]];
        prompt += '\n';
    }
    prompt += "Now generate more utterances that are different from the above ones\n";
    return prompt;
}

namespace {

std::string lowered(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> bootstrapUtterances(const std::vector<std::string>& seedUtterances,
                                             llm::CompletionBackend& backend,
                                             const BootstrapOptions& opts) {
    std::set<std::string> known;
    for (const auto& s : seedUtterances) known.insert(lowered(trimmed(s)));

    std::vector<std::string> out;
    uint64_t promptSeed = opts.seed;
    int attemptsSinceProgress = 0;
    while (static_cast<int>(out.size()) < opts.count) {
        llm::CompletionRequest req;
        req.prompt = buildBootstrapPrompt(seedUtterances, promptSeed);
        req.maxTokens = opts.maxTokens;
        req.temperature = opts.temperature;
        req.stopSequences = {"\n"};
        req.model = opts.model;
        ++promptSeed;  // vary the sampled seed set per call

        std::string utterance = trimmed(backend.complete(req));
        if (!utterance.empty() && known.insert(lowered(utterance)).second) {
            out.push_back(std::move(utterance));
            attemptsSinceProgress = 0;
            continue;
        }
        if (++attemptsSinceProgress >= opts.maxAttemptsPerUtterance)
            throw std::runtime_error(
                "utterance sampling exhausted: backend keeps returning duplicates");
    }
    return out;
}

std::vector<std::string> sampleKeywords(const std::vector<std::string>& keywords, int count,
                                        uint64_t seed) {
    if (count < 0 || static_cast<size_t>(count) > keywords.size())
        throw std::invalid_argument("cannot sample " + std::to_string(count) + " keywords from " +
                                    std::to_string(keywords.size()));
    std::vector<size_t> order = shuffledIndices(keywords.size(), seed);
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(keywords[order[static_cast<size_t>(i)]]);
    return out;
}

}  // namespace dataset
