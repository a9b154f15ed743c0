#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dataset/model.hpp"
#include "domainlang/signature.hpp"
#include "llm/backend.hpp"
#include "promptkit/builder.hpp"
#include "retrieval/bm25.hpp"

namespace engine {

enum class Mode { Decomposed, Direct };

const char* modeName(Mode m);
Mode modeFromName(const std::string& name);

enum class Status { InProgress, Done, Failed };
enum class FailReason { None, StepCapExceeded, BackendError };

struct VarRewrite {
    int stepIndex = 0;  // 1-based
    std::string from;
    std::string to;
};

struct DerivationState {
    std::string utterance;
    std::vector<dataset::DecompStep> steps;
    Status status = Status::InProgress;
    FailReason failReason = FailReason::None;
    std::string failMessage;
    std::vector<VarRewrite> rewrites;

    std::string program() const;  // fragments joined with newlines
};

struct RunConfig {
    promptkit::PromptConfig promptConfig;
    Mode mode = Mode::Decomposed;
    int stepCap = 8;
    std::string model;
    double trainFraction = 1.0;  // fraction of the elementary pool made available
    uint64_t trainFractionSeed = 0;
    int stepMaxTokens = 256;
    int directMaxTokens = 512;
};

struct LogRecord {
    std::string exampleId;
    int stepIndex = 0;  // 1-based; 0 for direct prediction
    std::string phase;  // decompose | parse | direct
    std::string promptDigest;
    std::string completion;
};

using LogSink = std::function<void(const LogRecord&)>;

struct SuiteResult {
    std::string exampleId;
    std::string utterance;
    std::string predicted;
    Status status = Status::Done;
    std::string failMessage;
    std::optional<DerivationState> derivation;  // decomposed mode only
};

class Runner {
  public:
    Runner(std::vector<dataset::ElementaryExample> elementaryPool,
           std::vector<dataset::ComplexExample> decompExemplars, RunConfig cfg);

    DerivationState runDecomposed(const std::string& utterance, llm::CompletionBackend& backend,
                                  const std::string& exampleId = "", const LogSink& log = {}) const;

    std::string runDirect(const std::string& utterance, llm::CompletionBackend& backend,
                          const std::string& exampleId = "", const LogSink& log = {}) const;

    // Runs every test example under the configured mode; per-example backend
    // failures are captured in the results, never aborting the suite.
    std::vector<SuiteResult> runSuite(const std::vector<dataset::ComplexExample>& testSet,
                                      llm::CompletionBackend& backend,
                                      const LogSink& log = {}) const;

    const std::vector<dataset::ElementaryExample>& elementaryPool() const { return pool_; }
    const std::vector<dataset::ComplexExample>& decompExemplars() const { return decomp_; }
    const RunConfig& config() const { return cfg_; }

    // Ranked elementary exemplars for a retrieval key, honoring the
    // configured selection policy and cap. Exposed for prompt inspection.
    std::vector<promptkit::RankedExemplar> selectExemplars(const std::string& key) const;

  private:
    std::vector<dataset::ElementaryExample> pool_;
    std::vector<dataset::ComplexExample> decomp_;
    RunConfig cfg_;
    retrieval::Bm25Index index_;

    std::string completeLogged(llm::CompletionBackend& backend, const llm::CompletionRequest& req,
                               const std::string& exampleId, int stepIndex,
                               const std::string& phase, const LogSink& log) const;
};

// Stable per-suite example ids: ex000, ex001, ...
std::string suiteExampleId(size_t index);

std::string logRecordToJsonLine(const LogRecord& r);
std::string suiteResultToJsonLine(const SuiteResult& r);
std::vector<SuiteResult> readSuiteResultsJsonl(const std::filesystem::path& path);

}  // namespace engine
