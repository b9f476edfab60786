#include "ug/remote_backend.hpp"

#include "ug/log.hpp"
#include "ug/wire.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace ug {

namespace {

// Splits "http://host:port/some/path" into origin and path. httplib takes
// the origin in its Client constructor and the path per request.
void split_url(const std::string& url, std::string& origin, std::string& path) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint_url must include a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    origin = url;
    path = "/v1/chat/completions";
  } else {
    origin = url.substr(0, path_start);
    path = url.substr(path_start);
    if (path == "/") path = "/v1/chat/completions";
  }
}

}  // namespace

RemoteBackend::RemoteBackend(BackendConfig config) : config_(std::move(config)) {
  if (config_.max_concurrency < 1) {
    throw std::invalid_argument("backend config: max_concurrency must be >= 1");
  }
  if (config_.top_logprobs_k < 1) {
    throw std::invalid_argument("backend config: top_logprobs_k must be >= 1");
  }
  split_url(config_.endpoint_url, host_, path_);
}

std::string RemoteBackend::describe() const {
  return "remote(" + config_.model_id + " @ " + config_.endpoint_url + ")";
}

ScoreOutcome RemoteBackend::score(const ScoringRequest& request) {
  if (request.prompt.empty()) throw std::invalid_argument("scoring request: empty prompt");
  const Json body = encode_chat_request(config_.model_id, request, config_.top_logprobs_k);
  const std::string payload = body.dump();

  std::string api_key;
  if (!config_.api_key_source.empty()) {
    if (const char* key = std::getenv(config_.api_key_source.c_str())) api_key = key;
  }

  double delay_s = config_.retry_initial_delay_s;
  std::string last_error;
  bool last_was_timeout = false;
  const int attempts = std::max(1, config_.retry_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::duration<double>(delay_s));
      delay_s *= 2.0;
    }
    // One client per call: httplib clients are not safe for concurrent
    // requests over a shared connection.
    httplib::Client client(host_);
    const auto timeout = std::chrono::duration<double>(config_.request_timeout_s);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      last_was_timeout =
          err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
      last_error = "transport failure (" + httplib::to_string(err) + ") talking to " + host_;
      log_warn("scoring attempt " + std::to_string(attempt) + "/" + std::to_string(attempts) +
               " failed: " + last_error);
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) +
                      "); check the " +
                      (config_.api_key_source.empty() ? std::string("API key configuration")
                                                      : config_.api_key_source) +
                      " environment variable");
    }
    if (res->status >= 400) {
      throw HttpStatusError(res->status, "endpoint returned HTTP " +
                                             std::to_string(res->status) + ": " + res->body);
    }
    return decode_chat_response(res->body);
  }
  if (last_was_timeout) {
    throw TimeoutError("scoring timed out after " + std::to_string(attempts) +
                       " attempts: " + last_error);
  }
  throw TransportError("scoring failed after " + std::to_string(attempts) +
                       " attempts: " + last_error);
}

}  // namespace ug
