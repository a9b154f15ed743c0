#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "dataset/io.hpp"
#include "dataset/ops.hpp"
#include "domainlang/checker.hpp"
#include "domainlang/token.hpp"
#include "llm/backend.hpp"

using namespace dataset;

namespace {

const domainlang::DomainSignature& sig() {
    static auto s = domainlang::loadSignature(std::string(STEPPARSE_DATA_DIR) + "/calendar.sig");
    return s;
}

std::filesystem::path dataPath(const char* name) {
    return std::filesystem::path(STEPPARSE_DATA_DIR) / name;
}

std::filesystem::path tmpFile(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

std::vector<ElementaryExample> syntheticElementary(size_t n) {
    std::vector<ElementaryExample> out;
    for (size_t i = 0; i < n; ++i)
        out.push_back({"synthetic utterance " + std::to_string(i), "val s1 = findEvents0"});
    return out;
}

// Queue-scripted backend for utterance sampling tests.
class QueueBackend : public llm::CompletionBackend {
  public:
    explicit QueueBackend(std::vector<std::string> lines) : lines_(std::move(lines)) {}
    std::string complete(const llm::CompletionRequest& req) override {
        if (at_ >= lines_.size()) throw llm::BackendError("queue exhausted");
        return llm::truncateAtStops(lines_[at_++], req.stopSequences);
    }

  private:
    std::vector<std::string> lines_;
    size_t at_ = 0;
};

}  // namespace

// ---------------------------------------------------------------- loading

TEST_CASE("bundled fixtures load strictly with zero warnings") {
    std::vector<std::string> warnings;
    LoadOptions opts;
    opts.sig = &sig();
    opts.warnings = &warnings;
    auto elem = loadElementary(dataPath("elementary.jsonl"), opts);
    auto train = loadComplex(dataPath("complex_train.jsonl"), opts);
    auto test = loadComplex(dataPath("complex_test.jsonl"), opts);
    CHECK(elem.size() == 50);
    CHECK(train.size() == 10);
    CHECK(test.size() == 10);
    CHECK(warnings.empty());
}

TEST_CASE("loader counts valid records") {
    auto path = tmpFile("elem_two.jsonl",
                        "{\"utterance\": \"u1\", \"program\": \"val s1 = findEvents0\"}\n"
                        "{\"utterance\": \"u2\", \"program\": \"val s1 = me\"}\n");
    LoadOptions opts;
    opts.sig = &sig();
    CHECK(loadElementary(path, opts).size() == 2);
}

TEST_CASE("strict mode names the diagnostic for a bad program") {
    auto path = tmpFile("elem_bad.jsonl",
                        "{\"utterance\": \"u\", \"program\": \"val s1 = fooBarBaz(7)\"}\n");
    LoadOptions opts;
    opts.sig = &sig();
    CHECK_THROWS_WITH_AS(loadElementary(path, opts), doctest::Contains("UnknownFunction"),
                         std::runtime_error);
    // lenient mode skips and reports
    std::vector<std::string> warnings;
    opts.mode = LoadMode::Lenient;
    opts.warnings = &warnings;
    CHECK(loadElementary(path, opts).empty());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("UnknownFunction") != std::string::npos);
}

TEST_CASE("complex records enforce step-variable positions") {
    auto path = tmpFile("cx_bad.jsonl",
                        "{\"utterance\": \"u\", \"steps\": [{\"nl\": \"one\", \"program\": "
                        "\"val s2 = findEvents0\"}], \"source\": \"human\"}\n");
    LoadOptions opts;
    opts.sig = &sig();
    CHECK_THROWS_WITH_AS(loadComplex(path, opts), doctest::Contains("expected 's1'"),
                         std::runtime_error);
}

TEST_CASE("load then save then load is the identity") {
    LoadOptions opts;
    opts.sig = &sig();
    auto train = loadComplex(dataPath("complex_train.jsonl"), opts);
    auto tmp = std::filesystem::temp_directory_path() / "roundtrip_cx.jsonl";
    saveComplex(tmp, train);
    auto again = loadComplex(tmp, opts);
    REQUIRE(again.size() == train.size());
    for (size_t i = 0; i < train.size(); ++i) {
        CHECK(again[i].utterance == train[i].utterance);
        CHECK(again[i].source == train[i].source);
        REQUIRE(again[i].steps.size() == train[i].steps.size());
        for (size_t j = 0; j < train[i].steps.size(); ++j) {
            CHECK(again[i].steps[j].nl == train[i].steps[j].nl);
            CHECK(again[i].steps[j].fragment == train[i].steps[j].fragment);
        }
    }

    auto elem = loadElementary(dataPath("elementary.jsonl"), opts);
    auto tmpE = std::filesystem::temp_directory_path() / "roundtrip_el.jsonl";
    saveElementary(tmpE, elem);
    auto againE = loadElementary(tmpE, opts);
    REQUIRE(againE.size() == elem.size());
    for (size_t i = 0; i < elem.size(); ++i) {
        CHECK(againE[i].utterance == elem[i].utterance);
        CHECK(againE[i].program == elem[i].program);
    }
}

// ---------------------------------------------------------------- splitting

TEST_CASE("the 872-example split gives the documented sizes") {
    auto examples = syntheticElementary(872);
    SplitSpec spec;
    spec.seed = 13;
    Split s = splitElementary(examples, spec);
    CHECK(s.train.size() == 612);
    CHECK(s.dev.size() == 130);
    CHECK(s.test.size() == 130);
}

TEST_CASE("degenerate ratios put everything in train") {
    SplitSpec spec;
    spec.train = 1.0;
    spec.dev = 0.0;
    spec.test = 0.0;
    Split s = splitElementary(syntheticElementary(10), spec);
    CHECK(s.train.size() == 10);
    CHECK(s.dev.empty());
    CHECK(s.test.empty());
}

TEST_CASE("splits are deterministic per seed and partition the input") {
    auto examples = syntheticElementary(101);
    SplitSpec spec;
    spec.seed = 7;
    Split a = splitElementary(examples, spec);
    Split b = splitElementary(examples, spec);
    for (size_t i = 0; i < a.train.size(); ++i)
        CHECK(a.train[i].utterance == b.train[i].utterance);
    for (size_t i = 0; i < a.test.size(); ++i) CHECK(a.test[i].utterance == b.test[i].utterance);

    std::multiset<std::string> all;
    for (const auto& e : a.train) all.insert(e.utterance);
    for (const auto& e : a.dev) all.insert(e.utterance);
    for (const auto& e : a.test) all.insert(e.utterance);
    std::multiset<std::string> want;
    for (const auto& e : examples) want.insert(e.utterance);
    CHECK(all == want);

    std::set<std::string> trainSet, devSet;
    for (const auto& e : a.train) trainSet.insert(e.utterance);
    for (const auto& e : a.dev) devSet.insert(e.utterance);
    for (const auto& e : a.test) {
        CHECK(trainSet.count(e.utterance) == 0);
        CHECK(devSet.count(e.utterance) == 0);
    }

    spec.seed = 8;
    Split c = splitElementary(examples, spec);
    bool anyDifferent = false;
    for (size_t i = 0; i < a.train.size() && i < c.train.size(); ++i)
        if (a.train[i].utterance != c.train[i].utterance) anyDifferent = true;
    CHECK(anyDifferent);
}

TEST_CASE("split validates its inputs") {
    SplitSpec bad;
    bad.train = 0.5;
    bad.dev = 0.1;
    bad.test = 0.1;
    CHECK_THROWS(splitElementary(syntheticElementary(10), bad));
    SplitSpec ok;
    CHECK_THROWS(splitElementary(syntheticElementary(2), ok));
}

// ---------------------------------------------------------------- stats

TEST_CASE("stats of an empty corpus report absent means") {
    StatsReport r = datasetStats({});
    CHECK(r.count == 0);
    CHECK(!r.meanSteps.has_value());
    CHECK(!r.meanTokensPerProgram.has_value());
}

TEST_CASE("mean and max step counts") {
    ComplexExample two;
    two.utterance = "a";
    two.steps = {{"n1", "val s1 = findEvents0"}, {"n2", "val s2 = s1.head"}};
    ComplexExample four;
    four.utterance = "b";
    four.steps = {{"n1", "val s1 = findEvents0"},
                  {"n2", "val s2 = s1.head"},
                  {"n3", "val s3 = deleteEvent(s2)"},
                  {"n4", "val s4 = findEvents0"}};
    StatsReport r = datasetStats({two, four});
    CHECK(*r.meanSteps == doctest::Approx(3.0));
    CHECK(r.maxSteps == 4);
}

TEST_CASE("hand-computed statistics fixture") {
    LoadOptions opts;
    opts.sig = &sig();
    auto hand = loadComplex(dataPath("stats_hand.jsonl"), opts);
    REQUIRE(hand.size() == 2);
    StatsReport r = datasetStats(hand);
    // program 1: val s1 = findEvents(queryAt(Monday))            -> 5 counted tokens
    //            val s2 = s1.map(x => cancelEvent(x))            -> 7 counted tokens
    // program 2: val s1 = findEvents(queryAt(today))             -> 5 counted tokens
    CHECK(*r.meanSteps == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(r.maxSteps == 2);
    CHECK(*r.meanTokensPerProgram == doctest::Approx(8.5).epsilon(1e-9));
    CHECK(*r.meanTokensPerFragment == doctest::Approx(17.0 / 3.0).epsilon(1e-9));
    CHECK(r.propertyCounts.at("query") == 2);
    CHECK(r.propertyCounts.at("delete") == 1);
    CHECK(r.propertyCounts.at("map") == 1);
    CHECK(r.propertyCounts.at("filter") == 0);
    CHECK(r.propertyCounts.at("conditional") == 0);
}

TEST_CASE("bundled complex fixtures mirror the reference step statistics") {
    LoadOptions opts;
    opts.sig = &sig();
    auto train = loadComplex(dataPath("complex_train.jsonl"), opts);
    auto test = loadComplex(dataPath("complex_test.jsonl"), opts);
    std::vector<ComplexExample> all = train;
    all.insert(all.end(), test.begin(), test.end());
    StatsReport r = datasetStats(all);
    CHECK(*r.meanSteps == doctest::Approx(2.9).epsilon(0.05 / 2.9));
    CHECK(r.maxSteps <= kMaxSteps);

    // independent naive recomputation
    double stepSum = 0;
    double tokenSum = 0;
    for (const auto& e : all) {
        stepSum += static_cast<double>(e.steps.size());
        size_t n = 0;
        for (const auto& t : domainlang::tokenizeProgram(e.fullProgram()))
            if (domainlang::isCountedToken(t)) ++n;
        tokenSum += static_cast<double>(n);
    }
    CHECK(*r.meanSteps ==
          doctest::Approx(stepSum / static_cast<double>(all.size())).epsilon(1e-9));
    CHECK(*r.meanTokensPerProgram ==
          doctest::Approx(tokenSum / static_cast<double>(all.size())).epsilon(1e-9));
}

// ------------------------------------------------------------ normalization

TEST_CASE("annotation normalization strips comments and renumbers variables") {
    ComplexExample raw;
    raw.utterance = "u";
    raw.steps = {{"first", "val s1 = findEvents0"},
                 {"second", "val s = s1.map(x => cancelEvent(x)) // note"}};
    auto out = normalizeAnnotations({raw}, sig());
    REQUIRE(out.size() == 1);
    CHECK(out[0].steps[0].fragment == "val s1 = findEvents0");
    CHECK(out[0].steps[1].fragment == "val s2 = s1.map(x => cancelEvent(x))");
    CHECK(validateComplex(out[0], &sig()).empty());
}

TEST_CASE("normalization of annotations is idempotent and canonicalizes aliases") {
    ComplexExample raw;
    raw.utterance = "u";
    raw.steps = {{"first", "val s1 = findAllEvents(titled(\"x\"))"}};
    auto once = normalizeAnnotations({raw}, sig());
    CHECK(once[0].steps[0].fragment == "val s1 = findEvents(called(\"x\"))");
    auto twice = normalizeAnnotations(once, sig());
    CHECK(twice[0].steps[0].fragment == once[0].steps[0].fragment);
}

TEST_CASE("normalizeAnnotations names the offending example") {
    ComplexExample bad;
    bad.utterance = "u";
    bad.steps = {{"first", "val s1 = ((("}};
    CHECK_THROWS_WITH_AS(normalizeAnnotations({bad}, sig()), doctest::Contains("example 0"),
                         std::runtime_error);
}

// ---------------------------------------------------------------- sampling

TEST_CASE("the sampling prompt matches its golden file") {
    LoadOptions opts;
    opts.sig = &sig();
    auto elem = loadElementary(dataPath("elementary.jsonl"), opts);
    std::vector<std::string> seeds;
    for (const auto& e : elem) seeds.push_back(e.utterance);
    std::string prompt = buildBootstrapPrompt(seeds, 7);
    std::ifstream golden(std::filesystem::path(STEPPARSE_FIXTURE_DIR) / "goldens" /
                         "bootstrap_prompt.txt", std::ios::binary);
    REQUIRE(golden.good());
    std::string want((std::istreambuf_iterator<char>(golden)),
                     std::istreambuf_iterator<char>());
    CHECK(prompt == want);
    CHECK(prompt.find("Now generate more utterances that are different from the above ones") !=
          std::string::npos);
}

TEST_CASE("sampled utterances pass through and deduplicate") {
    std::vector<std::string> seeds;
    for (int i = 0; i < 10; ++i) seeds.push_back("seed utterance " + std::to_string(i));

    QueueBackend novel({" Find my tasks\n", " Book a room\n", " Plan my day\n"});
    BootstrapOptions opts;
    opts.count = 3;
    auto out = bootstrapUtterances(seeds, novel, opts);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == "Find my tasks");

    // a duplicate of a seed costs an extra sample
    QueueBackend withDup({"Seed utterance 3\n", " Fresh one\n", " Another\n", " Third\n"});
    auto out2 = bootstrapUtterances(seeds, withDup, opts);
    REQUIRE(out2.size() == 3);
    CHECK(out2[0] == "Fresh one");

    // a backend stuck on one answer exhausts the dedup budget
    std::vector<std::string> same(100, "Seed utterance 1\n");
    QueueBackend stuck(same);
    CHECK_THROWS_WITH_AS(bootstrapUtterances(seeds, stuck, opts), doctest::Contains("exhausted"),
                         std::runtime_error);
}

TEST_CASE("bootstrap needs ten seed utterances") {
    QueueBackend backend({});
    BootstrapOptions opts;
    CHECK_THROWS(bootstrapUtterances({"one", "two"}, backend, opts));
}

TEST_CASE("keyword sampling is deterministic") {
    std::vector<std::string> keywords = {"decline", "pen", "vacation", "plan-my-day",
                                         "project-sync", "timezone", "count-of-meetings"};
    auto a = sampleKeywords(keywords, 5, 3);
    auto b = sampleKeywords(keywords, 5, 3);
    CHECK(a == b);
    CHECK(a.size() == 5);
    std::set<std::string> unique(a.begin(), a.end());
    CHECK(unique.size() == 5);
    CHECK_THROWS(sampleKeywords(keywords, 10, 1));
}
