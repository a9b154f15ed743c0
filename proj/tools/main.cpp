#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "dataset/io.hpp"
#include "dataset/ops.hpp"
#include "domainlang/checker.hpp"
#include "domainlang/normalizer.hpp"
#include "engine/runner.hpp"
#include "evalkit/metrics.hpp"
#include "evalkit/report.hpp"
#include "llm/live_client.hpp"
#include "llm/transcript.hpp"
#include "promptkit/builder.hpp"
#include "retrieval/bm25.hpp"

namespace {

constexpr const char* kVersion = "stepparse 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct CommonPaths {
    std::string config;
    std::string signature;
    std::string elementary;
    std::string train;
    std::string test;
};

domainlang::DomainSignature loadSig(const std::string& path) {
    if (path.empty()) throw cli::ConfigError("a signature file is required (--sig)");
    return domainlang::loadSignature(path);
}

std::string readAll(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string slurpFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cli::ConfigError("cannot open file: " + path);
    return readAll(in);
}

// Applies config-file values, then explicit flags, onto a RunConfig.
engine::RunConfig makeRunConfig(const cli::AppConfig& cfg) {
    engine::RunConfig rc;
    rc.promptConfig.m = static_cast<int>(cfg.integer("run.m", 20));
    rc.promptConfig.k = static_cast<int>(cfg.integer("run.k", 10));
    if (rc.promptConfig.m < 0 || rc.promptConfig.k < 0)
        throw cli::ConfigError("run.m and run.k must be non-negative");
    rc.promptConfig.includeElementary = cfg.boolean("run.include_elementary", true);
    rc.promptConfig.charBudget = static_cast<size_t>(cfg.integer("run.char_budget", 0));
    rc.promptConfig.header = cfg.str("run.header", "");
    std::string selection = cfg.str("run.selection", "bm25");
    if (selection == "random") {
        rc.promptConfig.selection.kind = promptkit::SelectionKind::Random;
        rc.promptConfig.selection.seed =
            static_cast<uint64_t>(cfg.integer("run.selection_seed", 0));
    } else if (selection != "bm25") {
        throw cli::ConfigError("run.selection must be bm25 or random");
    }
    rc.stepCap = static_cast<int>(cfg.integer("run.step_cap", 8));
    rc.model = cfg.str("backend.model", "text-davinci-003");
    rc.trainFraction = cfg.real("run.train_fraction", 1.0);
    rc.trainFractionSeed = static_cast<uint64_t>(cfg.integer("run.train_fraction_seed", 0));
    rc.stepMaxTokens = static_cast<int>(cfg.integer("run.step_max_tokens", 256));
    rc.directMaxTokens = static_cast<int>(cfg.integer("run.direct_max_tokens", 512));
    return rc;
}

llm::LiveClientConfig makeLiveConfig(const cli::AppConfig& cfg) {
    llm::LiveClientConfig lc;
    lc.host = cfg.str("backend.host", lc.host);
    lc.port = static_cast<int>(cfg.integer("backend.port", lc.port));
    lc.path = cfg.str("backend.path", lc.path);
    lc.authHeader = cfg.str("backend.auth_header", lc.authHeader);
    lc.authScheme = cfg.str("backend.auth_scheme", lc.authScheme);
    lc.credentialEnvVar = cfg.str("backend.credential_env", lc.credentialEnvVar);
    lc.model = cfg.str("backend.model", lc.model);
    lc.promptField = cfg.str("backend.prompt_field", lc.promptField);
    lc.modelField = cfg.str("backend.model_field", lc.modelField);
    lc.maxTokensField = cfg.str("backend.max_tokens_field", lc.maxTokensField);
    lc.temperatureField = cfg.str("backend.temperature_field", lc.temperatureField);
    lc.stopField = cfg.str("backend.stop_field", lc.stopField);
    lc.responseTextPath = cfg.str("backend.response_text_path", lc.responseTextPath);
    lc.maxRetries = static_cast<int>(cfg.integer("backend.max_retries", lc.maxRetries));
    lc.timeoutSeconds =
        static_cast<int>(cfg.integer("backend.timeout_seconds", lc.timeoutSeconds));
    lc.maxInFlight = static_cast<int>(cfg.integer("backend.max_in_flight", lc.maxInFlight));
    return lc;
}

dataset::LoadOptions strictLoad(const domainlang::DomainSignature& sig) {
    dataset::LoadOptions opts;
    opts.sig = &sig;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical utterance decomposition toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- check ----
    std::string checkFile, checkSigPath;
    bool checkStrict = false;
    auto* check = app.add_subcommand("check", "Type-check a program against a signature");
    check->add_option("file", checkFile, "program file")->required();
    check->add_option("--sig", checkSigPath, "signature file")->required();
    check->add_flag("--strict-vars", checkStrict,
                    "reject free step variables even in single fragments");

    // ---- normalize ----
    std::string normSigPath;
    auto* normalize =
        app.add_subcommand("normalize", "Canonicalize a program (stdin -> stdout)");
    normalize->add_option("--sig", normSigPath, "signature file")->required();

    // ---- split ----
    std::string splitInput, splitOutPrefix, splitRatios = "0.7,0.15,0.15";
    uint64_t splitSeed = 0;
    auto* split = app.add_subcommand("split", "Split an elementary dataset");
    split->add_option("--input", splitInput)->required();
    split->add_option("--seed", splitSeed);
    split->add_option("--ratios", splitRatios, "train,dev,test fractions");
    split->add_option("--out-prefix", splitOutPrefix)->required();

    // ---- stats ----
    std::string statsInput, statsSigPath;
    auto* stats = app.add_subcommand("stats", "Dataset statistics for complex examples");
    stats->add_option("--input", statsInput)->required();
    stats->add_option("--sig", statsSigPath);

    // ---- retrieve ----
    std::string retrInput, retrQuery;
    int retrM = 20;
    auto* retrieve = app.add_subcommand("retrieve", "Rank exemplars for a query");
    retrieve->add_option("--input", retrInput)->required();
    retrieve->add_option("--query", retrQuery)->required();
    retrieve->add_option("-m", retrM);

    // ---- prompt ----
    std::string prMode, prUtterance, prStep, prConfig;
    bool prDryRun = false;
    auto* prompt = app.add_subcommand("prompt", "Render a prompt without calling a backend");
    prompt->add_option("--mode", prMode, "decomp|step|direct")->required();
    prompt->add_option("--utterance", prUtterance)->required();
    prompt->add_option("--step", prStep, "current step (step mode)");
    prompt->add_option("--config", prConfig)->required();
    prompt->add_flag("--dry-run", prDryRun);

    // ---- run ----
    std::string runMode = "decomposed", runConfigPath, runMock, runOut, runLog;
    bool runLive = false;
    int64_t runSeed = -1;
    auto* run = app.add_subcommand("run", "Run the evaluation suite");
    run->add_option("--mode", runMode, "decomposed|direct");
    run->add_option("--config", runConfigPath)->required();
    run->add_option("--mock", runMock, "replay transcript (default mode)");
    run->add_flag("--live", runLive, "call the configured live backend");
    run->add_option("--out", runOut, "results jsonl")->required();
    run->add_option("--log", runLog, "prompt/completion audit log");
    run->add_option("--seed", runSeed, "overrides every seeded choice in the run config");

    // ---- eval ----
    std::string evResults, evGold, evSigPath, evJudgments, evOutPrefix, evMethod = "run";
    auto* eval = app.add_subcommand("eval", "Score predictions against gold programs");
    eval->add_option("--results", evResults)->required();
    eval->add_option("--gold", evGold)->required();
    eval->add_option("--sig", evSigPath)->required();
    eval->add_option("--judgments", evJudgments);
    eval->add_option("--out-prefix", evOutPrefix);
    eval->add_option("--method", evMethod, "row label in the report table");

    // ---- tag ----
    std::string tagRecords, tagTags;
    auto* tag = app.add_subcommand("tag", "Validate error tags and report frequencies");
    tag->add_option("--records", tagRecords)->required();
    tag->add_option("--tags", tagTags)->required();

    // ---- bootstrap ----
    std::string bsInput, bsConfig, bsMock;
    int bsCount = 10;
    double bsTemperature = 0.8;
    uint64_t bsSeed = 0;
    auto* bootstrap =
        app.add_subcommand("bootstrap", "Sample new utterances from seed examples");
    bootstrap->add_option("--input", bsInput, "elementary jsonl providing seeds")->required();
    bootstrap->add_option("--count", bsCount);
    bootstrap->add_option("--temperature", bsTemperature);
    bootstrap->add_option("--seed", bsSeed);
    bootstrap->add_option("--config", bsConfig, "backend config (for --live)");
    bootstrap->add_option("--mock", bsMock, "replay transcript");

    // ---- keywords ----
    std::string kwList;
    int kwCount = 5;
    uint64_t kwSeed = 0;
    auto* keywords = app.add_subcommand("keywords", "Sample authoring keywords");
    keywords->add_option("--list", kwList, "newline-separated keyword file");
    keywords->add_option("--count", kwCount);
    keywords->add_option("--seed", kwSeed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*check) {
            auto sig = loadSig(checkSigPath);
            domainlang::WellFormResult r = domainlang::wellFormText(
                slurpFile(checkFile), sig,
                checkStrict ? domainlang::FreeVarPolicy::Strict
                            : domainlang::FreeVarPolicy::SingleFragmentLenient);
            if (!r.ok) {
                for (const auto& d : r.diagnostics)
                    std::cerr << checkFile << ":" << d.format() << "\n";
                return kExitDomain;
            }
            return kExitOk;
        }

        if (*normalize) {
            auto sig = loadSig(normSigPath);
            std::cout << domainlang::normalizeProgram(readAll(std::cin), sig) << "\n";
            return kExitOk;
        }

        if (*split) {
            auto examples = dataset::loadElementary(splitInput, {});
            dataset::SplitSpec spec;
            spec.seed = splitSeed;
            if (std::sscanf(splitRatios.c_str(), "%lf,%lf,%lf", &spec.train, &spec.dev,
                            &spec.test) != 3)
                throw cli::ConfigError("--ratios must be train,dev,test");
            dataset::Split s = dataset::splitElementary(examples, spec);
            dataset::saveElementary(splitOutPrefix + ".train.jsonl", s.train);
            dataset::saveElementary(splitOutPrefix + ".dev.jsonl", s.dev);
            dataset::saveElementary(splitOutPrefix + ".test.jsonl", s.test);
            std::cout << "train=" << s.train.size() << " dev=" << s.dev.size()
                      << " test=" << s.test.size() << "\n";
            return kExitOk;
        }

        if (*stats) {
            dataset::LoadOptions opts;
            domainlang::DomainSignature sig;
            if (!statsSigPath.empty()) {
                sig = loadSig(statsSigPath);
                opts.sig = &sig;
            }
            auto complex = dataset::loadComplex(statsInput, opts);
            std::cout << dataset::statsToJson(dataset::datasetStats(complex)) << "\n";
            return kExitOk;
        }

        if (*retrieve) {
            auto examples = dataset::loadElementary(retrInput, {});
            std::vector<std::string> docs;
            for (const auto& e : examples) docs.push_back(e.utterance);
            auto idx = retrieval::Bm25Index::build(docs);
            for (const auto& sd : idx.topM(retrQuery, retrM))
                std::cout << sd.docId << "\t" << sd.score << "\t"
                          << examples[static_cast<size_t>(sd.docId)].utterance << "\n";
            return kExitOk;
        }

        if (*prompt) {
            cli::AppConfig cfg = cli::AppConfig::fromFile(prConfig);
            cfg.requirePathsExist();
            auto sig = loadSig(cfg.str("paths.signature"));
            auto elementary =
                dataset::loadElementary(cfg.str("paths.elementary"), strictLoad(sig));
            auto train = dataset::loadComplex(cfg.str("paths.train"), strictLoad(sig));
            engine::RunConfig rc = makeRunConfig(cfg);
            engine::Runner runner(elementary, train, rc);
            promptkit::Prompt p;
            if (prMode == "decomp") {
                p = promptkit::buildDecompositionPrompt(
                    prUtterance, {}, runner.selectExemplars(prUtterance), train,
                    rc.promptConfig);
            } else if (prMode == "step") {
                if (prStep.empty()) throw cli::ConfigError("--step is required in step mode");
                p = promptkit::buildStepParsePrompt(prUtterance, {}, prStep,
                                                    runner.selectExemplars(prStep), train,
                                                    rc.promptConfig);
            } else if (prMode == "direct") {
                p = promptkit::buildDirectPrompt(prUtterance,
                                                 runner.selectExemplars(prUtterance), train,
                                                 rc.promptConfig);
            } else {
                throw cli::ConfigError("--mode must be decomp, step or direct");
            }
            std::cout << p.text;
            if (!prDryRun) std::cout << "\n";
            return kExitOk;
        }

        if (*run) {
            cli::AppConfig cfg = cli::AppConfig::fromFile(runConfigPath);
            cfg.requirePathsExist();
            auto sig = loadSig(cfg.str("paths.signature"));
            auto elementary =
                dataset::loadElementary(cfg.str("paths.elementary"), strictLoad(sig));
            auto train = dataset::loadComplex(cfg.str("paths.train"), strictLoad(sig));
            auto test = dataset::loadComplex(cfg.str("paths.test"), strictLoad(sig));

            engine::RunConfig rc = makeRunConfig(cfg);
            rc.mode = engine::modeFromName(runMode);
            if (runSeed >= 0) {
                rc.promptConfig.selection.seed = static_cast<uint64_t>(runSeed);
                rc.trainFractionSeed = static_cast<uint64_t>(runSeed);
            }

            // decomposition exemplars: the whole train file (explicit mode) or a
            // seeded random sample of it
            long long sampleCount = cfg.integer("run.train_sample_count", 0);
            if (sampleCount > 0) {
                uint64_t sampleSeed = runSeed >= 0
                                          ? static_cast<uint64_t>(runSeed)
                                          : static_cast<uint64_t>(
                                                cfg.integer("run.train_sample_seed", 0));
                if (sampleCount > static_cast<long long>(train.size()))
                    throw cli::ConfigError("run.train_sample_count exceeds the train set");
                auto order = dataset::shuffledIndices(train.size(), sampleSeed);
                std::vector<dataset::ComplexExample> sampled;
                for (long long i = 0; i < sampleCount; ++i)
                    sampled.push_back(train[order[static_cast<size_t>(i)]]);
                train = std::move(sampled);
            }

            std::unique_ptr<llm::CompletionBackend> backend;
            if (runLive && !runMock.empty())
                throw cli::ConfigError("choose either --live or --mock");
            if (runLive) {
                backend = std::make_unique<llm::LiveClient>(makeLiveConfig(cfg));
            } else {
                std::string mockPath = !runMock.empty() ? runMock : cfg.str("paths.transcript");
                if (mockPath.empty())
                    throw cli::ConfigError(
                        "mock mode is the default: provide --mock or paths.transcript, or pass "
                        "--live");
                backend = std::make_unique<llm::MockBackend>(llm::readTranscript(mockPath));
            }

            std::ofstream logOut;
            engine::LogSink sink;
            if (!runLog.empty()) {
                logOut.open(runLog);
                if (!logOut) throw cli::ConfigError("cannot write log file: " + runLog);
                sink = [&logOut](const engine::LogRecord& r) {
                    logOut << engine::logRecordToJsonLine(r) << "\n";
                };
            }

            engine::Runner runner(elementary, train, rc);
            auto results = runner.runSuite(test, *backend, sink);

            std::ofstream out(runOut);
            if (!out) throw cli::ConfigError("cannot write results file: " + runOut);
            nlohmann::json header;
            header["config"] = nlohmann::json::parse(cfg.toJson());
            header["config"]["mode"] = runMode;
            out << header.dump() << "\n";
            for (const auto& r : results) out << engine::suiteResultToJsonLine(r) << "\n";

            size_t failed = 0;
            for (const auto& r : results)
                if (r.status == engine::Status::Failed) ++failed;
            std::cout << "examples=" << results.size() << " failed=" << failed << "\n";
            return failed == 0 ? kExitOk : kExitDomain;
        }

        if (*eval) {
            auto sig = loadSig(evSigPath);
            auto results = engine::readSuiteResultsJsonl(evResults);
            auto gold = dataset::loadComplex(evGold, strictLoad(sig));
            if (results.size() != gold.size())
                throw std::runtime_error("results and gold sizes differ: " +
                                         std::to_string(results.size()) + " vs " +
                                         std::to_string(gold.size()));
            std::vector<evalkit::EvalRecord> records;
            for (size_t i = 0; i < results.size(); ++i) {
                if (results[i].exampleId != engine::suiteExampleId(i))
                    throw std::runtime_error("results are not in suite order at line " +
                                             std::to_string(i + 1));
                records.push_back(evalkit::scoreRecord(results[i].exampleId,
                                                       results[i].predicted,
                                                       gold[i].fullProgram(), sig));
            }
            if (!evJudgments.empty())
                evalkit::mergeJudgments(records, evalkit::importJudgments(evJudgments));
            evalkit::Report report = evalkit::aggregate(records);
            if (!evOutPrefix.empty()) {
                evalkit::writeRecordsJsonl(evOutPrefix + ".records.jsonl", records);
                std::ofstream summary(evOutPrefix + ".summary.json");
                summary << evalkit::reportToJson(report) << "\n";
            }
            std::cout << evalkit::renderTable({{evMethod, report}});
            return kExitOk;
        }

        if (*tag) {
            auto records = evalkit::readRecordsJsonl(tagRecords);
            auto tags = evalkit::loadErrorTags(tagTags);
            evalkit::validateErrorTags(records, tags);
            for (const auto& [name, count] : evalkit::tagFrequencies(tags))
                std::cout << name << "\t" << count << "\n";
            return kExitOk;
        }

        if (*bootstrap) {
            auto examples = dataset::loadElementary(bsInput, {});
            std::vector<std::string> seeds;
            for (const auto& e : examples) seeds.push_back(e.utterance);
            std::unique_ptr<llm::CompletionBackend> backend;
            if (!bsMock.empty()) {
                backend = std::make_unique<llm::MockBackend>(llm::readTranscript(bsMock));
            } else if (!bsConfig.empty()) {
                backend = std::make_unique<llm::LiveClient>(
                    makeLiveConfig(cli::AppConfig::fromFile(bsConfig)));
            } else {
                throw cli::ConfigError("provide --mock (default mode) or --config for --live");
            }
            dataset::BootstrapOptions opts;
            opts.count = bsCount;
            opts.temperature = bsTemperature;
            opts.seed = bsSeed;
            for (const auto& u : dataset::bootstrapUtterances(seeds, *backend, opts))
                std::cout << u << "\n";
            return kExitOk;
        }

        if (*keywords) {
            std::vector<std::string> pool;
            std::istringstream in(kwList.empty() ? std::string() : slurpFile(kwList));
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) pool.push_back(line);
            if (pool.empty())
                pool = {"decline", "pen", "vacation", "plan-my-day", "project-sync",
                        "timezone", "count-of-meetings", "calendar-update"};
            for (const auto& k : dataset::sampleKeywords(pool, kwCount, kwSeed))
                std::cout << k << "\n";
            return kExitOk;
        }
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
