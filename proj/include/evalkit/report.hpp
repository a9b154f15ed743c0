#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domainlang/signature.hpp"

namespace evalkit {

struct EvalRecord {
    std::string exampleId;
    std::string prediction;
    std::string gold;
    int em = 0;
    int emRaw = 0;
    double charEd = 0.0;
    int wellForm = 0;
    std::optional<int> humanCorrect;
};

// Scores one prediction/gold pair.
EvalRecord scoreRecord(const std::string& exampleId, const std::string& prediction,
                       const std::string& gold, const domainlang::DomainSignature& sig);

struct Report {
    size_t n = 0;
    double emMean = 0.0;
    double emRawMean = 0.0;
    double charEdMean = 0.0;
    double wellFormMean = 0.0;
    std::optional<double> correctMean;  // absent when no record carries a judgment
    size_t correctN = 0;
};

// Means over all records; records failing WellForm stay in every denominator.
// A missing human judgment counts as incorrect when the record is not
// well-formed, and is excluded from the Correct mean otherwise.
Report aggregate(const std::vector<EvalRecord>& records);

struct SignificanceResult {
    double pValue = 1.0;
    double observedDiff = 0.0;  // mean(metric A) - mean(metric B)
};

// Paired bootstrap significance test over per-example values; records are
// paired by exampleId and both runs must cover the same ids.
SignificanceResult bootstrapSignificance(const std::vector<std::pair<std::string, double>>& runA,
                                         const std::vector<std::pair<std::string, double>>& runB,
                                         uint64_t seed, int resamples = 10000);

struct Judgment {
    std::string exampleId;
    bool correct = false;
};

std::vector<Judgment> importJudgments(const std::filesystem::path& path);

// Applies judgments; throws on unknown/duplicate ids and on judgments that
// contradict the malformed-implies-incorrect rule.
void mergeJudgments(std::vector<EvalRecord>& records, const std::vector<Judgment>& judgments);

// Error-analysis tags over records judged incorrect.
struct ErrorTag {
    std::string exampleId;
    std::set<std::string> tags;
};

extern const std::set<std::string> kKnownErrorTags;

std::vector<ErrorTag> loadErrorTags(const std::filesystem::path& path);
void validateErrorTags(const std::vector<EvalRecord>& records, const std::vector<ErrorTag>& tags);
std::map<std::string, int> tagFrequencies(const std::vector<ErrorTag>& tags);

// Plain-text results table ("Method  EM  CharEd  WellForm  Correct").
std::string renderTable(const std::vector<std::pair<std::string, Report>>& rows);

std::string reportToJson(const Report& r);
std::string recordToJsonLine(const EvalRecord& r);
std::vector<EvalRecord> readRecordsJsonl(const std::filesystem::path& path);
void writeRecordsJsonl(const std::filesystem::path& path, const std::vector<EvalRecord>& records);

}  // namespace evalkit
