#include "engine/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dataset/ops.hpp"
#include "domainlang/normalizer.hpp"

namespace engine {

using nlohmann::json;

const char* modeName(Mode m) { return m == Mode::Decomposed ? "decomposed" : "direct"; }

Mode modeFromName(const std::string& name) {
    if (name == "decomposed") return Mode::Decomposed;
    if (name == "direct") return Mode::Direct;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string DerivationState::program() const {
    std::string out;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (i) out += '\n';
        out += steps[i].fragment;
    }
    return out;
}

namespace {

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool isTerminator(const std::string& completion) {
    if (completion.empty()) return true;
    if (completion == promptkit::kEos) return true;
    if (completion.rfind("Utterance:", 0) == 0) return true;
    return false;
}

}  // namespace

Runner::Runner(std::vector<dataset::ElementaryExample> elementaryPool,
               std::vector<dataset::ComplexExample> decompExemplars, RunConfig cfg)
    : pool_(std::move(elementaryPool)), decomp_(std::move(decompExemplars)), cfg_(cfg) {
    if (cfg_.stepCap < 1) throw std::invalid_argument("stepCap must be >= 1");
    if (cfg_.promptConfig.m < 0 || cfg_.promptConfig.k < 0)
        throw std::invalid_argument("exemplar caps must be non-negative");
    if (cfg_.trainFraction <= 0.0 || cfg_.trainFraction > 1.0)
        throw std::invalid_argument("trainFraction must be in (0, 1]");
    if (cfg_.trainFraction < 1.0) {
        size_t keep = static_cast<size_t>(
            std::llround(cfg_.trainFraction * static_cast<double>(pool_.size())));
        keep = std::max<size_t>(keep, 1);
        std::vector<size_t> order =
            dataset::shuffledIndices(pool_.size(), cfg_.trainFractionSeed);
        std::vector<dataset::ElementaryExample> reduced;
        reduced.reserve(keep);
        for (size_t i = 0; i < keep && i < order.size(); ++i)
            reduced.push_back(pool_[order[i]]);
        pool_ = std::move(reduced);
    }
    std::vector<std::string> docs;
    docs.reserve(pool_.size());
    for (const auto& e : pool_) docs.push_back(e.utterance);
    index_ = retrieval::Bm25Index::build(docs);
}

std::vector<promptkit::RankedExemplar> Runner::selectExemplars(const std::string& key) const {
    std::vector<promptkit::RankedExemplar> out;
    int m = cfg_.promptConfig.m;
    if (m <= 0 || !cfg_.promptConfig.includeElementary) return out;
    if (cfg_.promptConfig.selection.kind == promptkit::SelectionKind::Random) {
        std::vector<size_t> order =
            dataset::shuffledIndices(pool_.size(), cfg_.promptConfig.selection.seed);
        for (size_t i = 0; i < order.size() && static_cast<int>(out.size()) < m; ++i)
            out.push_back(promptkit::RankedExemplar{pool_[order[i]], 0.0});
        return out;
    }
    for (const auto& sd : index_.topM(key, m))
        out.push_back(
            promptkit::RankedExemplar{pool_[static_cast<size_t>(sd.docId)], sd.score});
    return out;
}

std::string Runner::completeLogged(llm::CompletionBackend& backend,
                                   const llm::CompletionRequest& req,
                                   const std::string& exampleId, int stepIndex,
                                   const std::string& phase, const LogSink& log) const {
    std::string completion = backend.complete(req);
    if (log) {
        LogRecord rec;
        rec.exampleId = exampleId;
        rec.stepIndex = stepIndex;
        rec.phase = phase;
        rec.promptDigest = llm::requestDigest(req);
        rec.completion = completion;
        log(rec);
    }
    return completion;
}

DerivationState Runner::runDecomposed(const std::string& utterance,
                                      llm::CompletionBackend& backend,
                                      const std::string& exampleId, const LogSink& log) const {
    DerivationState state;
    state.utterance = utterance;
    std::map<std::string, std::string> renames;

    for (int j = 1; j <= cfg_.stepCap; ++j) {
        // next NL step, conditioned on everything so far
        promptkit::Prompt decompPrompt = promptkit::buildDecompositionPrompt(
            utterance, state.steps, selectExemplars(utterance), decomp_, cfg_.promptConfig);
        llm::CompletionRequest req;
        req.prompt = decompPrompt.text;
        req.stopSequences = decompPrompt.stopSequences;
        req.maxTokens = cfg_.stepMaxTokens;
        req.temperature = 0.0;
        req.model = cfg_.model;
        std::string stepText;
        stepText = trimmed(completeLogged(backend, req, exampleId, j, "decompose", log));
        if (isTerminator(stepText)) {
            state.status = Status::Done;
            return state;
        }

        // program fragment for that step; retrieval keys on the step text
        promptkit::Prompt parsePrompt = promptkit::buildStepParsePrompt(
            utterance, state.steps, stepText, selectExemplars(stepText), decomp_,
            cfg_.promptConfig);
        llm::CompletionRequest preq;
        preq.prompt = parsePrompt.text;
        preq.stopSequences = parsePrompt.stopSequences;
        preq.maxTokens = cfg_.stepMaxTokens;
        preq.temperature = 0.0;
        preq.model = cfg_.model;
        std::string fragment = trimmed(completeLogged(backend, preq, exampleId, j, "parse", log));

        std::string canonical = "s" + std::to_string(j);
        domainlang::FragmentRepair repair =
            domainlang::repairFragmentBinding(fragment, canonical, renames);
        if (repair.parsed) {
            if (repair.oldVar != canonical)
                state.rewrites.push_back(VarRewrite{j, repair.oldVar, canonical});
            renames[repair.oldVar] = canonical;
            fragment = repair.text;
        }
        state.steps.push_back(dataset::DecompStep{stepText, fragment});
    }

    // one more chance to stop cleanly at the cap
    promptkit::Prompt finalPrompt = promptkit::buildDecompositionPrompt(
        utterance, state.steps, selectExemplars(utterance), decomp_, cfg_.promptConfig);
    llm::CompletionRequest req;
    req.prompt = finalPrompt.text;
    req.stopSequences = finalPrompt.stopSequences;
    req.maxTokens = cfg_.stepMaxTokens;
    req.temperature = 0.0;
    req.model = cfg_.model;
    std::string next =
        trimmed(completeLogged(backend, req, exampleId, cfg_.stepCap + 1, "decompose", log));
    if (isTerminator(next)) {
        state.status = Status::Done;
        return state;
    }
    state.status = Status::Failed;
    state.failReason = FailReason::StepCapExceeded;
    state.failMessage = "step cap of " + std::to_string(cfg_.stepCap) + " reached";
    return state;
}

std::string Runner::runDirect(const std::string& utterance, llm::CompletionBackend& backend,
                              const std::string& exampleId, const LogSink& log) const {
    promptkit::Prompt prompt = promptkit::buildDirectPrompt(
        utterance, selectExemplars(utterance), decomp_, cfg_.promptConfig);
    llm::CompletionRequest req;
    req.prompt = prompt.text;
    req.stopSequences = prompt.stopSequences;
    req.maxTokens = cfg_.directMaxTokens;
    req.temperature = 0.0;
    req.model = cfg_.model;
    return trimmed(completeLogged(backend, req, exampleId, 0, "direct", log));
}

std::vector<SuiteResult> Runner::runSuite(const std::vector<dataset::ComplexExample>& testSet,
                                          llm::CompletionBackend& backend,
                                          const LogSink& log) const {
    for (const auto& exemplar : decomp_)
        for (const auto& t : testSet)
            if (t.utterance == exemplar.utterance)
                throw std::invalid_argument(
                    "test set overlaps the decomposition exemplars: " + t.utterance);
    std::vector<SuiteResult> out;
    out.reserve(testSet.size());
    for (size_t i = 0; i < testSet.size(); ++i) {
        SuiteResult res;
        res.exampleId = suiteExampleId(i);
        res.utterance = testSet[i].utterance;
        res.status = Status::Done;
        try {
            if (cfg_.mode == Mode::Decomposed) {
                DerivationState st = runDecomposed(testSet[i].utterance, backend, res.exampleId, log);
                res.predicted = st.program();
                res.status = st.status;
                res.failMessage = st.failMessage;
                res.derivation = std::move(st);
            } else {
                res.predicted = runDirect(testSet[i].utterance, backend, res.exampleId, log);
                res.status = Status::Done;
            }
        } catch (const std::exception& e) {
            res.status = Status::Failed;
            res.failMessage = e.what();
        }
        out.push_back(std::move(res));
    }
    return out;
}

std::string suiteExampleId(size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ex%03zu", index);
    return buf;
}

std::string logRecordToJsonLine(const LogRecord& r) {
    json j;
    j["exampleId"] = r.exampleId;
    j["stepIndex"] = r.stepIndex;
    j["phase"] = r.phase;
    j["promptDigest"] = r.promptDigest;
    j["completion"] = r.completion;
    return j.dump();
}

std::string suiteResultToJsonLine(const SuiteResult& r) {
    json j;
    j["exampleId"] = r.exampleId;
    j["utterance"] = r.utterance;
    j["predicted"] = r.predicted;
    j["status"] = r.status == Status::Done ? "done" : "failed";
    if (!r.failMessage.empty()) j["failMessage"] = r.failMessage;
    if (r.derivation) {
        json steps = json::array();
        for (const auto& s : r.derivation->steps)
            steps.push_back({{"nl", s.nl}, {"program", s.fragment}});
        j["steps"] = std::move(steps);
    }
    return j.dump();
}

std::vector<SuiteResult> readSuiteResultsJsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path.string());
    std::vector<SuiteResult> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.contains("config")) continue;  // header line
        SuiteResult r;
        r.exampleId = j.at("exampleId").get<std::string>();
        r.utterance = j.value("utterance", "");
        r.predicted = j.value("predicted", "");
        r.status = j.value("status", "done") == std::string("done") ? Status::Done : Status::Failed;
        r.failMessage = j.value("failMessage", "");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace engine
