#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace retrieval {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct ScoredDoc {
    int docId = 0;
    double score = 0.0;
};

// Lowercase alphanumeric tokenization shared by indexing and querying.
std::vector<std::string> textTokens(const std::string& text);

class Bm25Index {
  public:
    Bm25Index() = default;

    static Bm25Index build(const std::vector<std::string>& documents, Bm25Params params = {});

    // Top-m documents by BM25 score, descending; ties broken by ascending
    // docId; only strictly positive scores are returned.
    std::vector<ScoredDoc> topM(const std::string& query, int m) const;

    double scoreOf(const std::string& query, int docId) const;

    size_t size() const { return docLens_.size(); }
    double avgDocLen() const { return avgDocLen_; }
    const std::map<std::string, int>& documentFrequency() const { return docFreq_; }
    const Bm25Params& params() const { return params_; }

  private:
    Bm25Params params_;
    std::vector<int> docLens_;
    std::vector<std::map<std::string, int>> termFreq_;  // per-doc term counts
    std::map<std::string, int> docFreq_;
    double avgDocLen_ = 0.0;

    double idf(const std::string& term) const;
};

}  // namespace retrieval
