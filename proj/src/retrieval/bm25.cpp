#include "retrieval/bm25.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace retrieval {

std::vector<std::string> textTokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Bm25Index Bm25Index::build(const std::vector<std::string>& documents, Bm25Params params) {
    Bm25Index idx;
    idx.params_ = params;
    long long totalLen = 0;
    for (const auto& doc : documents) {
        std::vector<std::string> toks = textTokens(doc);
        totalLen += static_cast<long long>(toks.size());
        idx.docLens_.push_back(static_cast<int>(toks.size()));
        std::map<std::string, int> tf;
        for (auto& t : toks) ++tf[t];
        for (const auto& [term, n] : tf) {
            (void)n;
            ++idx.docFreq_[term];
        }
        idx.termFreq_.push_back(std::move(tf));
    }
    idx.avgDocLen_ =
        documents.empty() ? 0.0 : static_cast<double>(totalLen) / documents.size();
    return idx;
}

double Bm25Index::idf(const std::string& term) const {
    auto it = docFreq_.find(term);
    if (it == docFreq_.end()) return 0.0;
    double n = static_cast<double>(docLens_.size());
    double df = static_cast<double>(it->second);
    // non-negative variant: log(1 + (N - df + 0.5) / (df + 0.5))
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double Bm25Index::scoreOf(const std::string& query, int docId) const {
    if (docId < 0 || docId >= static_cast<int>(docLens_.size())) return 0.0;
    std::set<std::string> terms;
    for (auto& t : textTokens(query)) terms.insert(std::move(t));
    const auto& tf = termFreq_[docId];
    double lenNorm = avgDocLen_ > 0.0
                         ? params_.k1 * (1.0 - params_.b +
                                         params_.b * docLens_[docId] / avgDocLen_)
                         : params_.k1;
    double score = 0.0;
    for (const auto& term : terms) {
        auto it = tf.find(term);
        if (it == tf.end()) continue;
        double f = static_cast<double>(it->second);
        score += idf(term) * (f * (params_.k1 + 1.0)) / (f + lenNorm);
    }
    return score;
}

std::vector<ScoredDoc> Bm25Index::topM(const std::string& query, int m) const {
    std::vector<ScoredDoc> scored;
    if (m <= 0) return scored;
    for (int d = 0; d < static_cast<int>(docLens_.size()); ++d) {
        double s = scoreOf(query, d);
        if (s > 0.0) scored.push_back(ScoredDoc{d, s});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.docId < b.docId;
    });
    if (static_cast<int>(scored.size()) > m) scored.resize(static_cast<size_t>(m));
    return scored;
}

}  // namespace retrieval
