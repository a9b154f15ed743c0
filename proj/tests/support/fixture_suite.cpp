#include "fixture_suite.hpp"

#include <stdexcept>

namespace fixturesuite {

std::vector<NamedConfig> suiteConfigs() {
    std::vector<NamedConfig> out;

    engine::RunConfig base;
    base.mode = engine::Mode::Decomposed;
    base.promptConfig.m = 20;
    base.promptConfig.k = 10;
    base.model = "fixture-model";

    NamedConfig decomposed{"decomposed", base};
    out.push_back(decomposed);

    NamedConfig direct{"direct", base};
    direct.cfg.mode = engine::Mode::Direct;
    out.push_back(direct);

    NamedConfig noElementary{"no-elementary", base};
    noElementary.cfg.promptConfig.includeElementary = false;
    out.push_back(noElementary);

    NamedConfig k2{"k2", base};
    k2.cfg.promptConfig.k = 2;
    out.push_back(k2);

    NamedConfig m3{"m3", base};
    m3.cfg.promptConfig.m = 3;
    out.push_back(m3);

    return out;
}

Fixtures loadFixtures(const std::filesystem::path& dataDir) {
    Fixtures f;
    f.sig = domainlang::loadSignature(dataDir / "calendar.sig");
    dataset::LoadOptions opts;
    opts.sig = &f.sig;
    f.elementary = dataset::loadElementary(dataDir / "elementary.jsonl", opts);
    f.train = dataset::loadComplex(dataDir / "complex_train.jsonl", opts);
    f.test = dataset::loadComplex(dataDir / "complex_test.jsonl", opts);
    return f;
}

GoldScriptBackend::GoldScriptBackend(const std::vector<dataset::ComplexExample>& examples) {
    for (const auto& e : examples) byUtterance_[e.utterance] = &e;
}

namespace {

std::string lastLine(const std::string& text) {
    size_t nl = text.find_last_of('\n');
    return nl == std::string::npos ? text : text.substr(nl + 1);
}

// The test block's utterance is the last "Utterance: " line of the prompt.
std::string testUtterance(const std::string& prompt) {
    const std::string marker = "Utterance: ";
    size_t at = prompt.rfind(marker);
    if (at == std::string::npos) throw std::runtime_error("prompt has no utterance line");
    size_t end = prompt.find('\n', at);
    if (end == std::string::npos) end = prompt.size();
    return prompt.substr(at + marker.size(), end - at - marker.size());
}

}  // namespace

std::string GoldScriptBackend::complete(const llm::CompletionRequest& req) {
    std::string utterance = testUtterance(req.prompt);
    auto it = byUtterance_.find(utterance);
    if (it == byUtterance_.end())
        throw std::runtime_error("no gold example for utterance: " + utterance);
    const dataset::ComplexExample& gold = *it->second;

    std::string cue = lastLine(req.prompt);
    if (cue == "Program:") {
        // direct prediction: entire multi-line program
        return " " + gold.fullProgram();
    }
    if (cue.rfind("Step ", 0) == 0 && cue.back() == ':') {
        size_t j = std::stoul(cue.substr(5, cue.size() - 6));
        if (j < 1 || j > gold.steps.size()) return "";  // decomposition finished
        return " " + gold.steps[j - 1].nl;
    }
    if (cue.rfind("Program ", 0) == 0 && cue.back() == ':') {
        size_t j = std::stoul(cue.substr(8, cue.size() - 9));
        if (j < 1 || j > gold.steps.size())
            throw std::runtime_error("fragment cue out of range: " + cue);
        return " " + gold.steps[j - 1].fragment;
    }
    throw std::runtime_error("unrecognized prompt cue: " + cue);
}

}  // namespace fixturesuite
