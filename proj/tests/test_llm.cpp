#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "llm/backend.hpp"
#include "llm/live_client.hpp"
#include "llm/transcript.hpp"

using namespace llm;

TEST_CASE("sha256 known vectors") {
    CHECK(sha256Hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256Hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256Hex("The quick brown fox jumps over the lazy dog") ==
          "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
}

TEST_CASE("completions truncate at the first stop sequence") {
    CHECK(truncateAtStops("Find vacation next week\nStep 3:", {"\n"}) ==
          "Find vacation next week");
    CHECK(truncateAtStops("val s1 = a\nval s2 = b\n<EOS>\nmore", {"<EOS>"}) ==
          "val s1 = a\nval s2 = b\n");
    CHECK(truncateAtStops("no stops here", {"\n", "<EOS>"}) == "no stops here");
    CHECK(truncateAtStops("text", {}) == "text");
}

TEST_CASE("digest covers prompt, model, temperature and stops") {
    CompletionRequest a;
    a.prompt = "P";
    a.model = "m";
    a.temperature = 0.0;
    a.stopSequences = {"\n"};
    CompletionRequest b = a;
    CHECK(requestDigest(a) == requestDigest(b));
    b.temperature = 0.8;
    CHECK(requestDigest(a) != requestDigest(b));
    b = a;
    b.model = "m2";
    CHECK(requestDigest(a) != requestDigest(b));
    b = a;
    b.stopSequences = {"<EOS>"};
    CHECK(requestDigest(a) != requestDigest(b));
}

TEST_CASE("digest transcript replays by content") {
    CompletionRequest req;
    req.prompt = "Utterance: hi\nStep 1:";
    req.model = "m";
    req.stopSequences = {"\n"};

    Transcript t;
    t.add(req, " Find all meetings on Monday.");
    MockBackend mock(t);
    CHECK(mock.complete(req) == " Find all meetings on Monday.");

    CompletionRequest altered = req;
    altered.temperature = 0.8;
    CHECK_THROWS_AS(mock.complete(altered), BackendError);
}

TEST_CASE("mock applies stop-sequence truncation like a live backend") {
    CompletionRequest req;
    req.prompt = "p";
    req.stopSequences = {"\n"};
    Transcript t;
    t.add(req, "first line\nsecond line");
    MockBackend mock(t);
    CHECK(mock.complete(req) == "first line");
}

TEST_CASE("record then replay returns identical completions offline") {
    // scripted "live" backend
    class Scripted : public CompletionBackend {
      public:
        std::string complete(const CompletionRequest& req) override {
            return "echo:" + req.prompt;
        }
    } scripted;

    std::vector<CompletionRequest> reqs;
    for (int i = 0; i < 3; ++i) {
        CompletionRequest r;
        r.prompt = "prompt " + std::to_string(i);
        r.model = "m";
        reqs.push_back(r);
    }
    Transcript t = recordTranscript(scripted, reqs);
    CHECK(t.entries.size() == 3);

    auto path = std::filesystem::temp_directory_path() / "transcript_rt.jsonl";
    writeTranscript(path, t);
    Transcript back = readTranscript(path);
    CHECK(back.mode == TranscriptMode::ByDigest);
    MockBackend mock(back);
    for (const auto& r : reqs) CHECK(mock.complete(r) == "echo:" + r.prompt);
}

TEST_CASE("empty request list records an empty transcript") {
    class Never : public CompletionBackend {
      public:
        std::string complete(const CompletionRequest&) override {
            throw BackendError("should not be called");
        }
    } never;
    Transcript t = recordTranscript(never, {});
    CHECK(t.entries.empty());
}

TEST_CASE("sequential transcripts cross-check prompts when present") {
    Transcript t;
    t.mode = TranscriptMode::BySequence;
    t.entries.push_back({"", "expected prompt", "completion one"});
    MockBackend mock(t);
    CompletionRequest req;
    req.prompt = "different prompt";
    CHECK_THROWS_AS(mock.complete(req), BackendError);
}

TEST_CASE("live client speaks the configured wire format") {
    httplib::Server server;
    std::atomic<int> calls{0};
    server.Post("/v1/completions", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        auto body = nlohmann::json::parse(req.body);
        CHECK(body.at("model") == "test-model");
        CHECK(body.at("prompt") == "Utterance: hi\nProgram:");
        CHECK(body.at("max_tokens") == 128);
        CHECK(req.get_header_value("Authorization") == std::string("Bearer sekrit"));
        if (calls == 1) {  // transient failure: the client retries
            res.status = 503;
            return;
        }
        nlohmann::json out;
        out["choices"] = nlohmann::json::array();
        out["choices"].push_back({{"text", " val s1 = findEvents0\nextra"}});
        res.set_content(out.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread serverThread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    setenv("STEPPARSE_TEST_KEY", "sekrit", 1);
    LiveClientConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = port;
    cfg.credentialEnvVar = "STEPPARSE_TEST_KEY";
    cfg.model = "test-model";
    cfg.retryBaseMs = 1;
    LiveClient client(cfg);

    CompletionRequest req;
    req.prompt = "Utterance: hi\nProgram:";
    req.maxTokens = 128;
    req.stopSequences = {"\n"};
    CHECK(client.complete(req) == " val s1 = findEvents0");
    CHECK(calls == 2);

    server.stop();
    serverThread.join();
}

TEST_CASE("live client surfaces non-retryable failures") {
    httplib::Server server;
    server.Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
        res.status = 400;
        res.set_content("{\"error\": \"bad request\"}", "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread serverThread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    LiveClientConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = port;
    cfg.credentialEnvVar = "";
    LiveClient client(cfg);
    CompletionRequest req;
    req.prompt = "p";
    CHECK_THROWS_AS(client.complete(req), BackendError);

    server.stop();
    serverThread.join();
}
