#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "evalkit/metrics.hpp"
#include "evalkit/report.hpp"
#include "oracles.hpp"

using namespace evalkit;

namespace {

const domainlang::DomainSignature& sig() {
    static auto s = domainlang::loadSignature(std::string(STEPPARSE_DATA_DIR) + "/calendar.sig");
    return s;
}

std::string randomText(std::mt19937& rng, int maxLen) {
    static const char alphabet[] = "abcdef (),.\"=>0123456789xyz";
    int len = static_cast<int>(rng() % static_cast<uint32_t>(maxLen + 1));
    std::string s;
    for (int i = 0; i < len; ++i) s += alphabet[rng() % (sizeof(alphabet) - 1)];
    return s;
}

std::filesystem::path tmpFile(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

}  // namespace

// ------------------------------------------------------------ exact match

TEST_CASE("exact match is reflexive") {
    CHECK(exactMatch("val s1 = findEvents0", "val s1 = findEvents0", sig()) == 1);
}

TEST_CASE("exact match sees through naming and spacing variation") {
    CHECK(exactMatch("val s = findEvents(queryAt(Monday)).head",
                     "val  s1 =  findEvents(queryAt(Monday)).head", sig()) == 1);
    CHECK(exactMatchRaw("val s = findEvents0", "val s1 = findEvents0") == 0);
}

TEST_CASE("exact match sees through alias choice") {
    CHECK(exactMatch("val s1 = a concat b", "val s1 = a + b", sig()) == 1);
}

TEST_CASE("an extra argument breaks exact match") {
    CHECK(exactMatch("val s1 = findEvents(isAllDay and isBusy)", "val s1 = findEvents(isAllDay)",
                     sig()) == 0);
}

TEST_CASE("unparseable predictions compare verbatim after whitespace normalization") {
    CHECK(exactMatch("garbage ((", "garbage  ((", sig()) == 1);
    CHECK(exactMatch("garbage ((", "other", sig()) == 0);
}

// ----------------------------------------------------------- edit distance

TEST_CASE("character edit distance basics") {
    CHECK(charEditDistance("val s1 = findEvents0", "val s1 = findEvents0", sig()) == 0.0);
    CHECK(charEditDistance("abc", "abd", sig()) == doctest::Approx(1.0 / 3.0));
    CHECK(charEditDistance("", "ab", sig()) == 1.0);
    CHECK(charEditDistance("", "", sig()) == 0.0);
}

TEST_CASE("levenshtein agrees with the full-matrix oracle") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        std::string a = randomText(rng, 60);
        std::string b = randomText(rng, 60);
        CHECK(levenshtein(a, b) == oracles::levenshteinMatrix(a, b));
    }
}

TEST_CASE("edit distance is symmetric and the raw distance satisfies the triangle inequality") {
    std::mt19937 rng(77);
    for (int i = 0; i < 200; ++i) {
        std::string a = randomText(rng, 30);
        std::string b = randomText(rng, 30);
        std::string c = randomText(rng, 30);
        CHECK(charEditDistance(a, b, sig()) == charEditDistance(b, a, sig()));
        CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
    }
}

// --------------------------------------------------------------- wellForm

TEST_CASE("wellFormed judges parse plus type check") {
    CHECK(wellFormed("val s1 = findEvents0", sig()) == 1);
    CHECK(wellFormed("val s1 = findevents0", sig()) == 0);
    CHECK(wellFormed("val s1 = theEvent(", sig()) == 0);
    CHECK(wellFormed("no val binding at all", sig()) == 0);
}

TEST_CASE("every fixture gold program is well-formed and EM-reflexive") {
    std::ifstream in(std::string(STEPPARSE_DATA_DIR) + "/elementary.jsonl");
    REQUIRE(in.good());
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        std::string prog = j.at("program").get<std::string>();
        CAPTURE(prog);
        CHECK(wellFormed(prog, sig()) == 1);
        CHECK(exactMatch(prog, prog, sig()) == 1);
        ++n;
    }
    CHECK(n >= 40);
}

// -------------------------------------------------------------- aggregate

TEST_CASE("aggregate means") {
    std::vector<EvalRecord> recs(2);
    recs[0].exampleId = "a";
    recs[0].em = 1;
    recs[0].wellForm = 1;
    recs[1].exampleId = "b";
    recs[1].em = 0;
    recs[1].charEd = 0.4;
    recs[1].wellForm = 1;
    Report r = aggregate(recs);
    CHECK(r.emMean == doctest::Approx(0.5));
    CHECK(r.charEdMean == doctest::Approx(0.2));
    CHECK(r.wellFormMean == doctest::Approx(1.0));
    CHECK(!r.correctMean.has_value());
}

TEST_CASE("malformed predictions count as incorrect in the Correct denominator") {
    std::vector<EvalRecord> recs(2);
    recs[0].exampleId = "a";
    recs[0].wellForm = 1;
    recs[0].humanCorrect = 1;
    recs[1].exampleId = "b";
    recs[1].wellForm = 0;  // no judgment: auto-incorrect
    Report r = aggregate(recs);
    REQUIRE(r.correctMean.has_value());
    CHECK(r.correctN == 2);
    CHECK(*r.correctMean == doctest::Approx(0.5));
}

TEST_CASE("aggregate agrees with a naive second pass") {
    std::mt19937 rng(31);
    std::vector<EvalRecord> recs;
    for (int i = 0; i < 137; ++i) {
        EvalRecord r;
        r.exampleId = "e" + std::to_string(i);
        r.em = static_cast<int>(rng() % 2);
        r.charEd = static_cast<double>(rng() % 1000) / 1000.0;
        r.wellForm = static_cast<int>(rng() % 2);
        if (rng() % 3 == 0) r.humanCorrect = r.wellForm ? static_cast<int>(rng() % 2) : 0;
        recs.push_back(r);
    }
    Report rep = aggregate(recs);
    double em = 0, ce = 0, wf = 0;
    for (const auto& r : recs) {
        em += r.em;
        ce += r.charEd;
        wf += r.wellForm;
    }
    double n = static_cast<double>(recs.size());
    CHECK(rep.emMean == doctest::Approx(em / n).epsilon(1e-12));
    CHECK(rep.charEdMean == doctest::Approx(ce / n).epsilon(1e-12));
    CHECK(rep.wellFormMean == doctest::Approx(wf / n).epsilon(1e-12));
}

// ------------------------------------------------------------ significance

TEST_CASE("identical runs are not significantly different") {
    std::vector<std::pair<std::string, double>> run;
    for (int i = 0; i < 20; ++i) run.emplace_back("e" + std::to_string(i), i % 2);
    SignificanceResult r = bootstrapSignificance(run, run, 17);
    CHECK(r.pValue >= 0.05);
    CHECK(r.observedDiff == 0.0);
}

TEST_CASE("fully separated runs are significant") {
    std::vector<std::pair<std::string, double>> a, b;
    for (int i = 0; i < 20; ++i) {
        a.emplace_back("e" + std::to_string(i), 1.0);
        b.emplace_back("e" + std::to_string(i), 0.0);
    }
    SignificanceResult r = bootstrapSignificance(a, b, 17);
    CHECK(r.pValue < 0.05);
    CHECK(r.observedDiff == doctest::Approx(1.0));
}

TEST_CASE("significance requires paired ids") {
    std::vector<std::pair<std::string, double>> a = {{"x", 1.0}};
    std::vector<std::pair<std::string, double>> b = {{"y", 0.0}};
    CHECK_THROWS(bootstrapSignificance(a, b, 1));
}

// -------------------------------------------------------------- judgments

TEST_CASE("judgments import and merge") {
    auto path = tmpFile("judgments_ok.jsonl",
                        "{\"exampleId\": \"a\", \"correct\": true}\n"
                        "{\"exampleId\": \"b\", \"correct\": false}\n");
    auto judgments = importJudgments(path);
    REQUIRE(judgments.size() == 2);

    std::vector<EvalRecord> recs(2);
    recs[0].exampleId = "a";
    recs[0].wellForm = 1;
    recs[1].exampleId = "b";
    recs[1].wellForm = 1;
    mergeJudgments(recs, judgments);
    CHECK(*recs[0].humanCorrect == 1);
    CHECK(*recs[1].humanCorrect == 0);
}

TEST_CASE("duplicate and unknown judgment ids are rejected") {
    std::vector<EvalRecord> recs(1);
    recs[0].exampleId = "a";
    recs[0].wellForm = 1;
    CHECK_THROWS(mergeJudgments(recs, {{"a", true}, {"a", false}}));
    CHECK_THROWS(mergeJudgments(recs, {{"zz", true}}));
}

TEST_CASE("a malformed record cannot be judged correct") {
    std::vector<EvalRecord> recs(1);
    recs[0].exampleId = "a";
    recs[0].wellForm = 0;
    CHECK_THROWS(mergeJudgments(recs, {{"a", true}}));
    mergeJudgments(recs, {{"a", false}});
    CHECK(*recs[0].humanCorrect == 0);
}

// ------------------------------------------------------------- error tags

TEST_CASE("error tags only apply to incorrect records") {
    std::vector<EvalRecord> recs(2);
    recs[0].exampleId = "a";
    recs[0].wellForm = 1;
    recs[0].humanCorrect = 0;
    recs[1].exampleId = "b";
    recs[1].wellForm = 1;
    recs[1].humanCorrect = 1;
    std::vector<ErrorTag> ok = {{"a", {"hallucinatedApi", "typeError"}}};
    validateErrorTags(recs, ok);
    CHECK(tagFrequencies(ok).at("hallucinatedApi") == 1);
    std::vector<ErrorTag> bad = {{"b", {"syntaxError"}}};
    CHECK_THROWS(validateErrorTags(recs, bad));
}

// ------------------------------------------------------------- rendering

TEST_CASE("table renderer emits the canned elementary-parser row verbatim") {
    // 50 records: 31 exact matches, ten 0.50 edit distances elsewhere
    std::vector<EvalRecord> recs;
    for (int i = 0; i < 50; ++i) {
        EvalRecord r;
        r.exampleId = "e" + std::to_string(i);
        r.em = i < 31 ? 1 : 0;
        r.charEd = (i >= 31 && i < 41) ? 0.5 : 0.0;
        r.wellForm = 1;
        recs.push_back(r);
    }
    Report rep = aggregate(recs);
    std::string table = renderTable({{"LLM parser", rep}});
    CHECK(table.find("0.62") != std::string::npos);
    CHECK(table.find("0.10") != std::string::npos);
    CHECK(table.find("LLM parser") != std::string::npos);
    CHECK(table.find("EM") != std::string::npos);
}

TEST_CASE("records round-trip through jsonl") {
    std::vector<EvalRecord> recs(1);
    recs[0].exampleId = "a";
    recs[0].prediction = "val s1 = findEvents0";
    recs[0].gold = "val s1 = findEvents0";
    recs[0].em = 1;
    recs[0].wellForm = 1;
    recs[0].humanCorrect = 1;
    auto path = std::filesystem::temp_directory_path() / "records_rt.jsonl";
    writeRecordsJsonl(path, recs);
    auto back = readRecordsJsonl(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].exampleId == "a");
    CHECK(back[0].em == 1);
    CHECK(*back[0].humanCorrect == 1);
}
