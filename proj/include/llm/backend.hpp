#pragma once

#include <memory>
#include <string>
#include <vector>

namespace llm {

struct CompletionRequest {
    std::string prompt;
    int maxTokens = 256;
    double temperature = 0.0;  // 0 = greedy decoding
    std::vector<std::string> stopSequences;
    std::string model;
};

// Hex SHA-256 over the canonical encoding of (prompt, model, temperature, stops).
std::string requestDigest(const CompletionRequest& req);

// Cuts the completion at the first stop sequence; the stop text is excluded.
// Shared by every backend so live and replayed completions agree.
std::string truncateAtStops(const std::string& text, const std::vector<std::string>& stops);

class CompletionBackend {
  public:
    virtual ~CompletionBackend() = default;

    // Returns the completion text, already truncated at stop sequences.
    // Throws BackendError on failure.
    virtual std::string complete(const CompletionRequest& req) = 0;
};

class BackendError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string sha256Hex(const std::string& data);

}  // namespace llm
