#include "ug/remote_backend.hpp"

#include "ug/pipelines.hpp"
#include "ug/wire.hpp"

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace ug;

namespace {

// Minimal canned server driven per-test through a handler toggle.
struct CannedServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};

  explicit CannedServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server.Post("/v1/chat/completions", [this, handler](const httplib::Request& req,
                                                        httplib::Response& res) {
      ++hits;
      handler(req, res);
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~CannedServer() {
    server.stop();
    thread.join();
  }

  BackendConfig config() const {
    BackendConfig cfg;
    cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.model_id = "canned";
    cfg.retry_attempts = 2;
    cfg.retry_initial_delay_s = 0.01;
    cfg.request_timeout_s = 2.0;
    return cfg;
  }
};

const char* kOkBody = R"({
  "choices": [{
    "message": {"role": "assistant", "content": "A"},
    "logprobs": {"content": [
      {"token": "A", "logprob": -0.10536051565782628,
       "top_logprobs": [
         {"token": "A", "logprob": -0.10536051565782628},
         {"token": "B", "logprob": -2.3025850929940455}
       ]}
    ]}
  }]
})";

ScoringRequest simple_request() {
  ScoringRequest req;
  req.prompt = "Is this fine?";
  return req;
}

}  // namespace

TEST_SUITE_BEGIN("remote_backend");

TEST_CASE("successful round trip decodes the trace") {
  CannedServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(kOkBody, "application/json");
  });
  RemoteBackend backend(server.config());
  const auto outcome = backend.score(simple_request());
  CHECK(outcome.text == "A");
  REQUIRE(outcome.trace.steps.size() == 1u);
  CHECK(outcome.trace.steps[0].entries.size() == 2u);
  CHECK(outcome.trace.steps[0].residual_mass == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("request body carries the wire contract") {
  Json seen;
  CannedServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = Json::parse(req.body);
    res.set_content(kOkBody, "application/json");
  });
  RemoteBackend backend(server.config());
  backend.score(simple_request());
  CHECK(seen["model"] == "canned");
  CHECK(seen["logprobs"] == true);
  CHECK(seen["temperature"] == 0.0);
}

TEST_CASE("401 raises an auth error without retrying") {
  CannedServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
    res.set_content("{}", "application/json");
  });
  RemoteBackend backend(server.config());
  CHECK_THROWS_AS(backend.score(simple_request()), AuthError);
  CHECK(server.hits.load() == 1);
}

TEST_CASE("500 raises a non-retriable status error") {
  CannedServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  RemoteBackend backend(server.config());
  try {
    backend.score(simple_request());
    FAIL("expected HttpStatusError");
  } catch (const HttpStatusError& e) {
    CHECK(e.status() == 500);
    CHECK_FALSE(e.retriable());
  }
  CHECK(server.hits.load() == 1);
}

TEST_CASE("missing logprobs surfaces a capability error") {
  CannedServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"choices":[{"message":{"content":"A"}}]})", "application/json");
  });
  RemoteBackend backend(server.config());
  try {
    backend.score(simple_request());
    FAIL("expected CapabilityError");
  } catch (const CapabilityError& e) {
    CHECK(std::string(e.what()).find("logprob") != std::string::npos);
  }
}

TEST_CASE("a stalled server times out as a retriable error after the retry budget") {
  CannedServer server([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    res.set_content(kOkBody, "application/json");
  });
  auto cfg = server.config();
  cfg.request_timeout_s = 0.1;
  cfg.retry_attempts = 2;
  cfg.retry_initial_delay_s = 0.01;
  RemoteBackend backend(cfg);
  try {
    backend.score(simple_request());
    FAIL("expected TimeoutError");
  } catch (const TimeoutError& e) {
    CHECK(e.retriable());
  }
  CHECK(server.hits.load() == 2);
}

TEST_CASE("connection failures are retried up to the budget") {
  BackendConfig cfg;
  cfg.endpoint_url = "http://127.0.0.1:1";  // nothing listens here
  cfg.model_id = "void";
  cfg.retry_attempts = 3;
  cfg.retry_initial_delay_s = 0.005;
  cfg.request_timeout_s = 0.2;
  RemoteBackend backend(cfg);
  CHECK_THROWS_AS(backend.score(simple_request()), BackendError);
}

TEST_CASE("search pipeline runs end to end against a live canned endpoint") {
  // Every call answers "A" with near-one-hot logprobs; a single-crop grid
  // exercises the full score-then-answer flow over HTTP.
  CannedServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(kOkBody, "application/json");
  });
  auto backend = std::make_shared<RemoteBackend>(server.config());
  BackendPair pair{backend, backend};

  auto image = std::make_shared<Image>(Image::filled(16, 16, 0.5f, 0.5f, 0.5f));
  SearchConfig cfg;
  cfg.crop_fraction = 1.0;
  const auto result = ug_search(image, "Pick one.", {"first", "second"}, pair, cfg);
  CHECK(result.answer == "A");
  REQUIRE(result.candidates.size() == 1u);
  CHECK(result.candidates[0].scored());
  CHECK(server.hits.load() == 2);  // one scoring call, one answering call
}

TEST_CASE("api key is read from the configured environment variable") {
  std::string auth_header;
  CannedServer server([&](const httplib::Request& req, httplib::Response& res) {
    auth_header = req.get_header_value("Authorization");
    res.set_content(kOkBody, "application/json");
  });
  auto cfg = server.config();
  cfg.api_key_source = "UG_TEST_API_KEY";
  setenv("UG_TEST_API_KEY", "sk-fake-for-tests", 1);
  RemoteBackend backend(cfg);
  backend.score(simple_request());
  CHECK(auth_header == "Bearer sk-fake-for-tests");
  unsetenv("UG_TEST_API_KEY");
}

TEST_SUITE_END();
