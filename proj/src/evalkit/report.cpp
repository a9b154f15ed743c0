#include "evalkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "evalkit/metrics.hpp"

namespace evalkit {

using nlohmann::json;

EvalRecord scoreRecord(const std::string& exampleId, const std::string& prediction,
                       const std::string& gold, const domainlang::DomainSignature& sig) {
    EvalRecord r;
    r.exampleId = exampleId;
    r.prediction = prediction;
    r.gold = gold;
    r.em = exactMatch(prediction, gold, sig);
    r.emRaw = exactMatchRaw(prediction, gold);
    r.charEd = r.em ? 0.0 : charEditDistance(prediction, gold, sig);
    r.wellForm = wellFormed(prediction, sig);
    return r;
}

Report aggregate(const std::vector<EvalRecord>& records) {
    Report rep;
    rep.n = records.size();
    if (records.empty()) return rep;
    double em = 0, emRaw = 0, ce = 0, wf = 0, corr = 0;
    size_t corrN = 0;
    for (const auto& r : records) {
        em += r.em;
        emRaw += r.emRaw;
        ce += r.charEd;
        wf += r.wellForm;
        if (r.humanCorrect) {
            corr += *r.humanCorrect;
            ++corrN;
        } else if (r.wellForm == 0) {
            // malformed predictions count as incorrect without a judgment
            ++corrN;
        }
    }
    double n = static_cast<double>(records.size());
    rep.emMean = em / n;
    rep.emRawMean = emRaw / n;
    rep.charEdMean = ce / n;
    rep.wellFormMean = wf / n;
    rep.correctN = corrN;
    if (corrN > 0) rep.correctMean = corr / static_cast<double>(corrN);
    return rep;
}

SignificanceResult bootstrapSignificance(const std::vector<std::pair<std::string, double>>& runA,
                                         const std::vector<std::pair<std::string, double>>& runB,
                                         uint64_t seed, int resamples) {
    if (runA.size() != runB.size() || runA.empty())
        throw std::invalid_argument("bootstrap requires two equal-size non-empty runs");
    std::map<std::string, double> byIdB;
    for (const auto& [id, v] : runB) {
        if (!byIdB.emplace(id, v).second)
            throw std::invalid_argument("duplicate exampleId in run B: " + id);
    }
    std::vector<double> diffs;
    diffs.reserve(runA.size());
    std::set<std::string> seen;
    for (const auto& [id, v] : runA) {
        if (!seen.insert(id).second)
            throw std::invalid_argument("duplicate exampleId in run A: " + id);
        auto it = byIdB.find(id);
        if (it == byIdB.end())
            throw std::invalid_argument("exampleId missing from run B: " + id);
        diffs.push_back(v - it->second);
    }

    SignificanceResult out;
    double mean = 0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(diffs.size());
    out.observedDiff = mean;

    std::mt19937_64 rng(seed);
    const size_t n = diffs.size();
    int le = 0, ge = 0;
    for (int b = 0; b < resamples; ++b) {
        double s = 0;
        for (size_t i = 0; i < n; ++i) s += diffs[rng() % n];
        double m = s / static_cast<double>(n);
        if (m <= 0) ++le;
        if (m >= 0) ++ge;
    }
    double pLow = static_cast<double>(le + 1) / (resamples + 1);
    double pHigh = static_cast<double>(ge + 1) / (resamples + 1);
    out.pValue = std::min(1.0, 2.0 * std::min(pLow, pHigh));
    return out;
}

std::vector<Judgment> importJudgments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open judgments file: " + path.string());
    std::vector<Judgment> out;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineNo) + ": " +
                                     e.what());
        }
        if (!j.contains("exampleId") || !j.contains("correct") || !j["correct"].is_boolean())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineNo) +
                                     ": expected {exampleId, correct}");
        out.push_back(Judgment{j["exampleId"].get<std::string>(), j["correct"].get<bool>()});
    }
    return out;
}

void mergeJudgments(std::vector<EvalRecord>& records, const std::vector<Judgment>& judgments) {
    std::map<std::string, EvalRecord*> byId;
    for (auto& r : records) byId[r.exampleId] = &r;
    std::set<std::string> seen;
    for (const auto& j : judgments) {
        if (!seen.insert(j.exampleId).second)
            throw std::runtime_error("duplicate judgment for exampleId " + j.exampleId);
        auto it = byId.find(j.exampleId);
        if (it == byId.end())
            throw std::runtime_error("judgment for unknown exampleId " + j.exampleId);
        if (j.correct && it->second->wellForm == 0)
            throw std::runtime_error("exampleId " + j.exampleId +
                                     " is not well-formed and cannot be judged correct");
        it->second->humanCorrect = j.correct ? 1 : 0;
    }
}

const std::set<std::string> kKnownErrorTags = {
    "hallucinatedApi", "syntaxError", "typeError", "partialIntent", "semanticMismatch"};

std::vector<ErrorTag> loadErrorTags(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tags file: " + path.string());
    std::vector<ErrorTag> out;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j = json::parse(line);
        ErrorTag t;
        t.exampleId = j.at("exampleId").get<std::string>();
        for (const auto& tag : j.at("tags")) {
            std::string name = tag.get<std::string>();
            if (!kKnownErrorTags.count(name))
                throw std::runtime_error(path.string() + ":" + std::to_string(lineNo) +
                                         ": unknown tag '" + name + "'");
            t.tags.insert(std::move(name));
        }
        out.push_back(std::move(t));
    }
    return out;
}

void validateErrorTags(const std::vector<EvalRecord>& records,
                       const std::vector<ErrorTag>& tags) {
    std::map<std::string, const EvalRecord*> byId;
    for (const auto& r : records) byId[r.exampleId] = &r;
    for (const auto& t : tags) {
        auto it = byId.find(t.exampleId);
        if (it == byId.end())
            throw std::runtime_error("tags for unknown exampleId " + t.exampleId);
        const EvalRecord& r = *it->second;
        bool judgedIncorrect =
            (r.humanCorrect && *r.humanCorrect == 0) || (!r.humanCorrect && r.wellForm == 0);
        if (!judgedIncorrect)
            throw std::runtime_error("exampleId " + t.exampleId +
                                     " is not judged incorrect; tags not applicable");
    }
}

std::map<std::string, int> tagFrequencies(const std::vector<ErrorTag>& tags) {
    std::map<std::string, int> freq;
    for (const auto& t : tags)
        for (const auto& name : t.tags) ++freq[name];
    return freq;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string renderTable(const std::vector<std::pair<std::string, Report>>& rows) {
    size_t nameWidth = 6;
    for (const auto& [name, rep] : rows) nameWidth = std::max(nameWidth, name.size());
    std::string out = "Method";
    out += std::string(nameWidth - 6, ' ');
    out += "  EM    CharEd  WellForm  Correct\n";
    for (const auto& [name, rep] : rows) {
        out += name;
        out += std::string(nameWidth - name.size(), ' ');
        out += "  " + fmt2(rep.emMean);
        out += "  " + fmt2(rep.charEdMean) + "  ";
        out += "  " + fmt2(rep.wellFormMean) + "   ";
        out += "  " + (rep.correctMean ? fmt2(*rep.correctMean) : std::string("-"));
        out += '\n';
    }
    return out;
}

std::string reportToJson(const Report& r) {
    json j;
    j["n"] = r.n;
    j["em"] = r.emMean;
    j["emRaw"] = r.emRawMean;
    j["charEd"] = r.charEdMean;
    j["wellForm"] = r.wellFormMean;
    if (r.correctMean) j["correct"] = *r.correctMean;
    j["correctN"] = r.correctN;
    return j.dump(2);
}

std::string recordToJsonLine(const EvalRecord& r) {
    json j;
    j["exampleId"] = r.exampleId;
    j["prediction"] = r.prediction;
    j["gold"] = r.gold;
    j["em"] = r.em;
    j["emRaw"] = r.emRaw;
    j["charEd"] = r.charEd;
    j["wellForm"] = r.wellForm;
    if (r.humanCorrect) j["humanCorrect"] = *r.humanCorrect;
    return j.dump();
}

std::vector<EvalRecord> readRecordsJsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path.string());
    std::vector<EvalRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        EvalRecord r;
        r.exampleId = j.at("exampleId").get<std::string>();
        r.prediction = j.value("prediction", "");
        r.gold = j.value("gold", "");
        r.em = j.value("em", 0);
        r.emRaw = j.value("emRaw", 0);
        r.charEd = j.value("charEd", 0.0);
        r.wellForm = j.value("wellForm", 0);
        if (j.contains("humanCorrect")) r.humanCorrect = j["humanCorrect"].get<int>();
        out.push_back(std::move(r));
    }
    return out;
}

void writeRecordsJsonl(const std::filesystem::path& path,
                       const std::vector<EvalRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write records file: " + path.string());
    for (const auto& r : records) out << recordToJsonLine(r) << '\n';
}

}  // namespace evalkit
