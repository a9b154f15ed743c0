#include "dataset/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "domainlang/checker.hpp"
#include "domainlang/parser.hpp"

namespace dataset {

using nlohmann::json;

const char* sourceName(Source s) { return s == Source::Human ? "human" : "generated"; }

Source sourceFromName(const std::string& name) {
    if (name == "human") return Source::Human;
    if (name == "generated") return Source::Generated;
    throw std::invalid_argument("unknown source '" + name + "'");
}

std::string ComplexExample::fullProgram() const {
    std::string out;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (i) out += '\n';
        out += steps[i].fragment;
    }
    return out;
}

void SplitSpec::validate() const {
    if (train < 0 || dev < 0 || test < 0)
        throw std::invalid_argument("split ratios must be non-negative");
    double sum = train + dev + test;
    if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9)
        throw std::invalid_argument("split ratios must sum to 1");
}

std::string validateElementary(const ElementaryExample& e,
                               const domainlang::DomainSignature* sig) {
    if (e.utterance.empty()) return "empty utterance";
    domainlang::ParseResult pr = domainlang::parseProgram(e.program);
    if (!pr.ok)
        return "program does not parse: " +
               (pr.diagnostics.empty() ? std::string("?") : pr.diagnostics.front().format());
    if (pr.program.fragments.size() != 1)
        return "elementary program must have exactly one fragment, found " +
               std::to_string(pr.program.fragments.size());
    if (sig) {
        domainlang::CheckOptions opts;
        opts.allowFreeStepVars = true;  // fragments may reference ambient step variables
        domainlang::CheckResult cr = domainlang::checkProgram(pr.program, *sig, opts);
        if (!cr.ok) return "program is not well-formed: " + cr.diagnostics.front().format();
    }
    return "";
}

std::string validateComplex(const ComplexExample& e, const domainlang::DomainSignature* sig) {
    if (e.utterance.empty()) return "empty utterance";
    if (e.steps.empty()) return "no decomposition steps";
    if (e.steps.size() > kMaxSteps)
        return "too many steps (" + std::to_string(e.steps.size()) + " > " +
               std::to_string(kMaxSteps) + ")";
    for (size_t j = 0; j < e.steps.size(); ++j) {
        if (e.steps[j].nl.empty()) return "step " + std::to_string(j + 1) + " has empty text";
        domainlang::ParseResult pr = domainlang::parseProgram(e.steps[j].fragment);
        if (!pr.ok)
            return "step " + std::to_string(j + 1) + " fragment does not parse: " +
                   (pr.diagnostics.empty() ? std::string("?")
                                           : pr.diagnostics.front().format());
        if (pr.program.fragments.size() != 1)
            return "step " + std::to_string(j + 1) + " must be a single fragment";
        std::string expected = "s" + std::to_string(j + 1);
        if (pr.program.fragments[0].varName != expected)
            return "step " + std::to_string(j + 1) + " binds '" +
                   pr.program.fragments[0].varName + "', expected '" + expected + "'";
    }
    if (sig) {
        domainlang::WellFormResult wf =
            domainlang::wellFormText(e.fullProgram(), *sig, domainlang::FreeVarPolicy::Strict);
        if (!wf.ok)
            return "program is not well-formed: " +
                   (wf.diagnostics.empty() ? std::string("?") : wf.diagnostics.front().format());
    }
    return "";
}

namespace {

template <typename T, typename ParseFn, typename ValidateFn>
std::vector<T> loadJsonl(const std::filesystem::path& path, const LoadOptions& opts,
                         ParseFn parseRecord, ValidateFn validate) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
    std::vector<T> out;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::string problem;
        T rec;
        try {
            rec = parseRecord(json::parse(line));
        } catch (const std::exception& e) {
            problem = e.what();
        }
        if (problem.empty()) problem = validate(rec);
        if (!problem.empty()) {
            std::string msg = path.string() + ":" + std::to_string(lineNo) + ": " + problem;
            if (opts.mode == LoadMode::Strict) throw std::runtime_error(msg);
            if (opts.warnings) opts.warnings->push_back(msg);
            continue;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

std::vector<ElementaryExample> loadElementary(const std::filesystem::path& path,
                                              const LoadOptions& opts) {
    return loadJsonl<ElementaryExample>(
        path, opts,
        [](const json& j) {
            ElementaryExample e;
            e.utterance = j.at("utterance").get<std::string>();
            e.program = j.at("program").get<std::string>();
            return e;
        },
        [&](const ElementaryExample& e) { return validateElementary(e, opts.sig); });
}

std::vector<ComplexExample> loadComplex(const std::filesystem::path& path,
                                        const LoadOptions& opts) {
    return loadJsonl<ComplexExample>(
        path, opts,
        [](const json& j) {
            ComplexExample e;
            e.utterance = j.at("utterance").get<std::string>();
            for (const auto& s : j.at("steps")) {
                DecompStep step;
                step.nl = s.at("nl").get<std::string>();
                step.fragment = s.at("program").get<std::string>();
                e.steps.push_back(std::move(step));
            }
            e.source = sourceFromName(j.value("source", "human"));
            return e;
        },
        [&](const ComplexExample& e) { return validateComplex(e, opts.sig); });
}

void saveElementary(const std::filesystem::path& path,
                    const std::vector<ElementaryExample>& examples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path.string());
    for (const auto& e : examples) {
        json j;
        j["utterance"] = e.utterance;
        j["program"] = e.program;
        out << j.dump() << '\n';
    }
}

void saveComplex(const std::filesystem::path& path,
                 const std::vector<ComplexExample>& examples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path.string());
    for (const auto& e : examples) {
        json steps = json::array();
        for (const auto& s : e.steps) steps.push_back({{"nl", s.nl}, {"program", s.fragment}});
        json j;
        j["utterance"] = e.utterance;
        j["steps"] = std::move(steps);
        j["source"] = sourceName(e.source);
        out << j.dump() << '\n';
    }
}

}  // namespace dataset
