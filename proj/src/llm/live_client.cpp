#include "llm/live_client.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace llm {

using nlohmann::json;

namespace {

// Walks a dot-separated path through the response document.
const json* walkPath(const json& doc, const std::string& path) {
    const json* cur = &doc;
    std::istringstream parts(path);
    std::string part;
    while (std::getline(parts, part, '.')) {
        if (cur->is_array()) {
            size_t idx = 0;
            try {
                idx = std::stoul(part);
            } catch (...) {
                return nullptr;
            }
            if (idx >= cur->size()) return nullptr;
            cur = &(*cur)[idx];
        } else if (cur->is_object()) {
            auto it = cur->find(part);
            if (it == cur->end()) return nullptr;
            cur = &*it;
        } else {
            return nullptr;
        }
    }
    return cur;
}

class Semaphore {
  public:
    explicit Semaphore(int slots) : slots_(slots) {}
    void acquire() {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return slots_ > 0; });
        --slots_;
    }
    void release() {
        std::lock_guard lk(mu_);
        ++slots_;
        cv_.notify_one();
    }

  private:
    std::mutex mu_;
    std::condition_variable cv_;
    int slots_;
};

}  // namespace

struct LiveClient::Impl {
    LiveClientConfig cfg;
    Semaphore inFlight;
    std::string credential;

    explicit Impl(LiveClientConfig c) : cfg(std::move(c)), inFlight(cfg.maxInFlight) {
        if (!cfg.credentialEnvVar.empty()) {
            if (const char* v = std::getenv(cfg.credentialEnvVar.c_str())) credential = v;
        }
    }
};

LiveClient::LiveClient(LiveClientConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

LiveClient::~LiveClient() = default;

std::string LiveClient::complete(const CompletionRequest& req) {
    const LiveClientConfig& cfg = impl_->cfg;

    json body;
    body[cfg.modelField] = req.model.empty() ? cfg.model : req.model;
    body[cfg.promptField] = req.prompt;
    body[cfg.maxTokensField] = req.maxTokens;
    body[cfg.temperatureField] = req.temperature;
    if (!req.stopSequences.empty()) body[cfg.stopField] = req.stopSequences;
    std::string payload = body.dump();

    impl_->inFlight.acquire();
    struct Release {
        Semaphore& s;
        ~Release() { s.release(); }
    } release{impl_->inFlight};

    std::string lastError;
    for (int attempt = 0; attempt <= cfg.maxRetries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.retryBaseMs << (attempt - 1)));
        }
        httplib::Client client(cfg.host, cfg.port);
        client.set_connection_timeout(cfg.timeoutSeconds);
        client.set_read_timeout(cfg.timeoutSeconds);
        httplib::Headers headers;
        if (!impl_->credential.empty()) {
            std::string value =
                cfg.authScheme.empty() ? impl_->credential : cfg.authScheme + " " + impl_->credential;
            headers.emplace(cfg.authHeader, value);
        }
        auto res = client.Post(cfg.path, headers, payload, "application/json");
        if (!res) {
            lastError = "transport error: " + httplib::to_string(res.error());
            continue;  // transient
        }
        if (res->status == 429 || res->status >= 500) {
            lastError = "server status " + std::to_string(res->status);
            continue;  // transient
        }
        if (res->status != 200) {
            throw BackendError("completion request failed with status " +
                               std::to_string(res->status) + ": " + res->body.substr(0, 200));
        }
        json doc;
        try {
            doc = json::parse(res->body);
        } catch (const json::parse_error& e) {
            throw BackendError(std::string("malformed completion response: ") + e.what());
        }
        const json* text = walkPath(doc, cfg.responseTextPath);
        if (!text || !text->is_string())
            throw BackendError("completion response lacks text at " + cfg.responseTextPath);
        return truncateAtStops(text->get<std::string>(), req.stopSequences);
    }
    throw BackendError("completion failed after " + std::to_string(cfg.maxRetries + 1) +
                       " attempts: " + lastError);
}

}  // namespace llm
