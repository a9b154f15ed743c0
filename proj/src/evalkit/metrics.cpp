#include "evalkit/metrics.hpp"

#include <algorithm>

#include "domainlang/checker.hpp"
#include "domainlang/normalizer.hpp"

namespace evalkit {

int exactMatch(const std::string& pred, const std::string& gold,
               const domainlang::DomainSignature& sig) {
    return domainlang::canonicalForComparison(pred, sig) ==
                   domainlang::canonicalForComparison(gold, sig)
               ? 1
               : 0;
}

int exactMatchRaw(const std::string& pred, const std::string& gold) {
    return pred == gold ? 1 : 0;
}

size_t levenshtein(const std::string& a, const std::string& b) {
    const size_t n = a.size();
    const size_t m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<size_t> prev(m + 1);
    std::vector<size_t> cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double charEditDistance(const std::string& pred, const std::string& gold,
                        const domainlang::DomainSignature& sig) {
    std::string p = domainlang::canonicalForComparison(pred, sig);
    std::string g = domainlang::canonicalForComparison(gold, sig);
    size_t denom = std::max(p.size(), g.size());
    if (denom == 0) return 0.0;
    return static_cast<double>(levenshtein(p, g)) / static_cast<double>(denom);
}

int wellFormed(const std::string& pred, const domainlang::DomainSignature& sig) {
    domainlang::WellFormResult r =
        domainlang::wellFormText(pred, sig, domainlang::FreeVarPolicy::SingleFragmentLenient);
    return r.ok ? 1 : 0;
}

}  // namespace evalkit
