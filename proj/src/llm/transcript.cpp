#include "llm/transcript.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace llm {

using nlohmann::json;

namespace {

std::string formatTemperature(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", t);
    return buf;
}

}  // namespace

std::string requestDigest(const CompletionRequest& req) {
    json j;
    j["model"] = req.model;
    j["prompt"] = req.prompt;
    j["stops"] = req.stopSequences;
    j["temperature"] = formatTemperature(req.temperature);
    return sha256Hex(j.dump());
}

std::string truncateAtStops(const std::string& text, const std::vector<std::string>& stops) {
    size_t cut = text.size();
    for (const auto& stop : stops) {
        if (stop.empty()) continue;
        size_t at = text.find(stop);
        if (at != std::string::npos && at < cut) cut = at;
    }
    return text.substr(0, cut);
}

void Transcript::add(const CompletionRequest& req, const std::string& completion) {
    TranscriptEntry e;
    e.digest = requestDigest(req);
    e.prompt = req.prompt;
    e.completion = completion;
    entries.push_back(std::move(e));
}

Transcript readTranscript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open transcript: " + path.string());
    Transcript t;
    std::string line;
    int lineNo = 0;
    bool anyDigest = false;
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
        TranscriptEntry e;
        if (j.contains("digest")) {
            e.digest = j["digest"].get<std::string>();
            anyDigest = true;
        }
        if (j.contains("prompt")) e.prompt = j["prompt"].get<std::string>();
        if (!j.contains("completion"))
            throw std::runtime_error(path.string() + ":" + std::to_string(lineNo) +
                                     ": missing completion");
        e.completion = j["completion"].get<std::string>();
        t.entries.push_back(std::move(e));
    }
    t.mode = anyDigest ? TranscriptMode::ByDigest : TranscriptMode::BySequence;
    return t;
}

void writeTranscript(const std::filesystem::path& path, const Transcript& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write transcript: " + path.string());
    for (const auto& e : t.entries) {
        json j;
        if (t.mode == TranscriptMode::ByDigest) j["digest"] = e.digest;
        else j["prompt"] = e.prompt;
        j["completion"] = e.completion;
        out << j.dump() << '\n';
    }
}

MockBackend::MockBackend(Transcript transcript) : transcript_(std::move(transcript)) {
    if (transcript_.mode == TranscriptMode::ByDigest) {
        for (const auto& e : transcript_.entries) {
            auto [it, inserted] = byDigest_.emplace(e.digest, e.completion);
            if (!inserted && it->second != e.completion)
                throw std::runtime_error("transcript has conflicting entries for digest " +
                                         e.digest);
        }
    }
}

std::string MockBackend::complete(const CompletionRequest& req) {
    std::lock_guard lock(mu_);
    ++served_;
    if (transcript_.mode == TranscriptMode::ByDigest) {
        auto it = byDigest_.find(requestDigest(req));
        if (it == byDigest_.end())
            throw BackendError("transcript miss for prompt beginning: " +
                               req.prompt.substr(0, 120));
        return truncateAtStops(it->second, req.stopSequences);
    }
    if (cursor_ >= transcript_.entries.size())
        throw BackendError("transcript exhausted after " + std::to_string(cursor_) +
                           " completions");
    const TranscriptEntry& e = transcript_.entries[cursor_++];
    if (!e.prompt.empty() && e.prompt != req.prompt)
        throw BackendError("transcript prompt mismatch at entry " + std::to_string(cursor_));
    return truncateAtStops(e.completion, req.stopSequences);
}

std::string RecordingBackend::complete(const CompletionRequest& req) {
    std::string completion = inner_.complete(req);
    transcript_.add(req, completion);
    return completion;
}

Transcript recordTranscript(CompletionBackend& backend,
                            const std::vector<CompletionRequest>& requests) {
    RecordingBackend rec(backend);
    for (const auto& req : requests) rec.complete(req);
    return rec.transcript();
}

}  // namespace llm
