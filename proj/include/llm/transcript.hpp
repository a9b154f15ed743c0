#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "llm/backend.hpp"

namespace llm {

enum class TranscriptMode { ByDigest, BySequence };

struct TranscriptEntry {
    std::string digest;  // ByDigest lookups
    std::string prompt;  // optional cross-check / BySequence
    std::string completion;
};

struct Transcript {
    TranscriptMode mode = TranscriptMode::ByDigest;
    std::vector<TranscriptEntry> entries;

    void add(const CompletionRequest& req, const std::string& completion);
};

Transcript readTranscript(const std::filesystem::path& path);
void writeTranscript(const std::filesystem::path& path, const Transcript& t);

// Deterministic offline backend replaying a recorded transcript. A request
// with no matching entry is a hard failure (BackendError).
class MockBackend : public CompletionBackend {
  public:
    explicit MockBackend(Transcript transcript);

    std::string complete(const CompletionRequest& req) override;

    size_t served() const { return served_; }

  private:
    Transcript transcript_;
    std::map<std::string, std::string> byDigest_;
    mutable std::mutex mu_;
    size_t cursor_ = 0;
    size_t served_ = 0;
};

// Records every request/completion pair passing through an inner backend.
class RecordingBackend : public CompletionBackend {
  public:
    explicit RecordingBackend(CompletionBackend& inner) : inner_(inner) {}

    std::string complete(const CompletionRequest& req) override;

    const Transcript& transcript() const { return transcript_; }

  private:
    CompletionBackend& inner_;
    Transcript transcript_;
};

// Runs a request batch through a backend, returning the replayable transcript.
Transcript recordTranscript(CompletionBackend& backend,
                            const std::vector<CompletionRequest>& requests);

}  // namespace llm
