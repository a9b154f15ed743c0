#pragma once

#include <string>

#include "llm/backend.hpp"

namespace llm {

// Wire configuration for a plain prompt -> text completion HTTP endpoint.
// Field names are configurable so any provider with that contract fits.
struct LiveClientConfig {
    std::string host = "localhost";
    int port = 80;
    std::string path = "/v1/completions";
    std::string authHeader = "Authorization";
    std::string authScheme = "Bearer";       // prepended to the credential
    std::string credentialEnvVar = "COMPLETION_API_KEY";
    std::string model = "text-davinci-003";

    std::string promptField = "prompt";
    std::string modelField = "model";
    std::string maxTokensField = "max_tokens";
    std::string temperatureField = "temperature";
    std::string stopField = "stop";
    // dot-separated path into the response JSON; numeric parts index arrays
    std::string responseTextPath = "choices.0.text";

    int maxRetries = 3;
    int retryBaseMs = 250;    // doubled per attempt
    int timeoutSeconds = 60;
    int maxInFlight = 4;
};

class LiveClient : public CompletionBackend {
  public:
    explicit LiveClient(LiveClientConfig config);
    ~LiveClient() override;

    std::string complete(const CompletionRequest& req) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace llm
