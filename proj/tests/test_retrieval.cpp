#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "retrieval/bm25.hpp"

using retrieval::Bm25Index;
using retrieval::ScoredDoc;

namespace {

std::vector<std::string> randomCorpus(std::mt19937& rng, int maxDocs) {
    static const char* words[] = {"find",  "meeting", "email",  "monday", "next",
                                  "week",  "cancel",  "create", "vacation", "report",
                                  "sync",  "today",   "manager", "room",   "lunch"};
    int nDocs = 1 + static_cast<int>(rng() % static_cast<uint32_t>(maxDocs));
    std::vector<std::string> docs;
    for (int d = 0; d < nDocs; ++d) {
        int len = 1 + static_cast<int>(rng() % 12);
        std::string doc;
        for (int w = 0; w < len; ++w) {
            if (w) doc += ' ';
            doc += words[rng() % 15];
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::string randomQuery(std::mt19937& rng) {
    static const char* words[] = {"find", "meeting", "email", "monday", "next", "week",
                                  "cancel", "zebra"};
    int len = 1 + static_cast<int>(rng() % 4);
    std::string q;
    for (int w = 0; w < len; ++w) {
        if (w) q += ' ';
        q += words[rng() % 8];
    }
    return q;
}

}  // namespace

TEST_CASE("tokenization lowercases and splits on non-alphanumerics") {
    auto toks = retrieval::textTokens("Find John's meetings, ASAP!");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0] == "find");
    CHECK(toks[1] == "john");
    CHECK(toks[2] == "s");
    CHECK(toks[3] == "meetings");
    CHECK(toks[4] == "asap");
}

TEST_CASE("empty corpus builds an empty index") {
    Bm25Index idx = Bm25Index::build({});
    CHECK(idx.size() == 0);
    CHECK(idx.avgDocLen() == 0.0);
    CHECK(idx.topM("anything", 5).empty());
}

TEST_CASE("document frequency matches a brute-force count") {
    std::vector<std::string> docs = {"find meetings monday", "find emails", "cancel meetings"};
    Bm25Index idx = Bm25Index::build(docs);
    CHECK(idx.documentFrequency().at("find") == 2);
    CHECK(idx.documentFrequency().at("meetings") == 2);
    CHECK(idx.documentFrequency().at("monday") == 1);
    CHECK(idx.avgDocLen() == doctest::Approx((3 + 2 + 2) / 3.0));
}

TEST_CASE("duplicate documents are indexed under distinct ids") {
    Bm25Index idx = Bm25Index::build({"same text", "same text"});
    auto top = idx.topM("same", 10);
    REQUIRE(top.size() == 2);
    CHECK(top[0].docId == 0);
    CHECK(top[1].docId == 1);
    CHECK(top[0].score == doctest::Approx(top[1].score));
}

TEST_CASE("exact-match document ranks first when others share no terms") {
    Bm25Index idx = Bm25Index::build(
        {"completely unrelated words", "find vacation next week", "другое", "cancel lunch"});
    auto top = idx.topM("find vacation next week", 4);
    REQUIRE(!top.empty());
    CHECK(top[0].docId == 1);
    for (const auto& sd : top) CHECK(sd.score > 0.0);
}

TEST_CASE("five-document toy corpus matches the hand-computed table") {
    // scores computed independently with the same k1=1.2, b=0.75 and
    // idf = ln(1 + (N - df + 0.5)/(df + 0.5)); avgdl = 4.8
    Bm25Index idx = Bm25Index::build({
        "find meetings on monday",
        "cancel the meetings on tuesday",
        "find emails from lisa",
        "create a meeting with jenn",
        "find all meetings next monday morning",
    });
    auto top = idx.topM("find meetings monday", 5);
    REQUIRE(top.size() == 4);  // "create a meeting with jenn" shares no term
    CHECK(top[0].docId == 0);
    CHECK(top[0].score == doctest::Approx(2.096397963611).epsilon(1e-9));
    CHECK(top[1].docId == 4);
    CHECK(top[1].score == doctest::Approx(1.772212711506).epsilon(1e-9));
    CHECK(top[2].docId == 2);
    CHECK(top[2].score == doctest::Approx(0.578435269079).epsilon(1e-9));
    CHECK(top[3].docId == 1);
    CHECK(top[3].score == doctest::Approx(0.529963039827).epsilon(1e-9));
}

TEST_CASE("m=0 yields an empty result") {
    Bm25Index idx = Bm25Index::build({"find meetings"});
    CHECK(idx.topM("find", 0).empty());
}

TEST_CASE("ranking equals the naive oracle on random corpora") {
    std::mt19937 rng(1234);
    for (int round = 0; round < 200; ++round) {
        std::vector<std::string> docs = randomCorpus(rng, 50);
        std::string q = randomQuery(rng);
        Bm25Index idx = Bm25Index::build(docs);
        auto got = idx.topM(q, static_cast<int>(docs.size()));
        auto want = oracles::bm25TopM(docs, q, static_cast<int>(docs.size()));
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].docId == want[i].docId);
            CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-9));
        }
    }
}

TEST_CASE("topM(m) is a prefix of topM(m+1)") {
    std::mt19937 rng(99);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::string> docs = randomCorpus(rng, 30);
        std::string q = randomQuery(rng);
        Bm25Index idx = Bm25Index::build(docs);
        for (int m = 1; m <= 10; ++m) {
            auto small = idx.topM(q, m);
            auto big = idx.topM(q, m + 1);
            REQUIRE(small.size() <= big.size());
            for (size_t i = 0; i < small.size(); ++i) {
                CHECK(small[i].docId == big[i].docId);
                CHECK(small[i].score == big[i].score);
            }
        }
    }
}

TEST_CASE("adding a term-disjoint document keeps relative order in equal-length corpora") {
    std::vector<std::string> docs = {"find meetings monday", "cancel meetings monday",
                                     "email reports friday"};
    std::string q = "meetings monday";
    Bm25Index before = Bm25Index::build(docs);
    auto rankedBefore = before.topM(q, 10);
    docs.push_back("zzz yyy xxx");  // same length, no query terms
    Bm25Index after = Bm25Index::build(docs);
    auto rankedAfter = after.topM(q, 10);
    REQUIRE(rankedBefore.size() == rankedAfter.size());
    for (size_t i = 0; i < rankedBefore.size(); ++i)
        CHECK(rankedBefore[i].docId == rankedAfter[i].docId);
}

TEST_CASE("scores are finite and non-negative") {
    std::mt19937 rng(5);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::string> docs = randomCorpus(rng, 20);
        Bm25Index idx = Bm25Index::build(docs);
        for (const auto& sd : idx.topM(randomQuery(rng), 20)) {
            CHECK(std::isfinite(sd.score));
            CHECK(sd.score >= 0.0);
        }
    }
}
