#pragma once

// Independent reference implementations used to cross-check the library.
// These stay deliberately naive: full-matrix DP, per-document rescoring.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "retrieval/bm25.hpp"

namespace oracles {

// Full-matrix Levenshtein, O(n*m) memory.
inline size_t levenshteinMatrix(const std::string& a, const std::string& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<std::vector<size_t>> d(n + 1, std::vector<size_t>(m + 1, 0));
    for (size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= m; ++j) {
            size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
        }
    }
    return d[n][m];
}

// Per-document BM25 recomputation over the raw corpus, same formula family
// (k1/b, unique query terms, log(1 + (N - df + 0.5)/(df + 0.5)) idf).
inline double bm25Score(const std::vector<std::string>& corpus, const std::string& query,
                        size_t docId, double k1 = 1.2, double b = 0.75) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& d : corpus) docs.push_back(retrieval::textTokens(d));
    double avg = 0;
    for (const auto& d : docs) avg += static_cast<double>(d.size());
    avg = corpus.empty() ? 0.0 : avg / static_cast<double>(corpus.size());

    std::set<std::string> qTerms;
    for (const auto& t : retrieval::textTokens(query)) qTerms.insert(t);

    double score = 0;
    for (const auto& term : qTerms) {
        size_t df = 0;
        for (const auto& d : docs)
            if (std::find(d.begin(), d.end(), term) != d.end()) ++df;
        if (df == 0) continue;
        size_t tf = 0;
        for (const auto& t : docs[docId])
            if (t == term) ++tf;
        if (tf == 0) continue;
        double idf = std::log(1.0 + (static_cast<double>(corpus.size()) -
                                     static_cast<double>(df) + 0.5) /
                                        (static_cast<double>(df) + 0.5));
        double norm = avg > 0 ? k1 * (1 - b + b * static_cast<double>(docs[docId].size()) / avg)
                              : k1;
        score += idf * (static_cast<double>(tf) * (k1 + 1)) / (static_cast<double>(tf) + norm);
    }
    return score;
}

inline std::vector<retrieval::ScoredDoc> bm25TopM(const std::vector<std::string>& corpus,
                                                  const std::string& query, int m) {
    std::vector<retrieval::ScoredDoc> scored;
    for (size_t d = 0; d < corpus.size(); ++d) {
        double s = bm25Score(corpus, query, d);
        if (s > 0) scored.push_back({static_cast<int>(d), s});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const retrieval::ScoredDoc& x, const retrieval::ScoredDoc& y) {
                         if (x.score != y.score) return x.score > y.score;
                         return x.docId < y.docId;
                     });
    if (m >= 0 && static_cast<int>(scored.size()) > m) scored.resize(static_cast<size_t>(m));
    return scored;
}

}  // namespace oracles
