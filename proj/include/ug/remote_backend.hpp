#pragma once

/**
 * @file remote_backend.hpp
 * @brief HTTP client backend for chat-completion endpoints that report
 *        per-token log-probabilities.
 */

#include "ug/backend.hpp"

#include <string>

namespace ug {

/// Talks to a chat-completions endpoint over HTTP. Transport-level failures
/// (connection reset, timeout) are retried with exponential backoff up to
/// the configured attempt budget; HTTP status >= 400 and contract
/// violations are surfaced immediately. The API key, when configured, is
/// read from the environment variable named in the config at request time
/// and sent as a bearer token; it is never logged or persisted.
///
/// Thread safety: score() may be called concurrently; each call uses its
/// own connection.
class RemoteBackend final : public Backend {
public:
  explicit RemoteBackend(BackendConfig config);

  ScoreOutcome score(const ScoringRequest& request) override;

  std::string describe() const override;

  const BackendConfig& config() const { return config_; }

private:
  BackendConfig config_;
  std::string host_;   // scheme://host:port
  std::string path_;   // request path, default /v1/chat/completions
};

}  // namespace ug
