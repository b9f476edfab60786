#pragma once

/**
 * @file backend.hpp
 * @brief Scoring/answering backend abstraction.
 *
 * A backend turns (visual inputs, prompt) into a GenerationTrace of
 * per-token probability distributions plus the generated text. Two
 * implementations exist: a remote chat-completions client that requests
 * per-token log-probabilities (remote_backend.hpp) and a deterministic
 * synthetic oracle (oracle.hpp).
 */

#include "ug/candidates.hpp"
#include "ug/image.hpp"
#include "ug/uncertainty.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ug {

/// One visual input of a request: a source (on-disk image file or in-memory
/// raster), optionally restricted to a crop of that source. Geometry
/// metadata travels alongside so backends that reason about placement (the
/// synthetic oracle) know what the pixels show without decoding them.
///
/// When `crop` is set the pixels actually shown are
/// render_crop(source, crop, render_side); rendering happens lazily at
/// encode time so a request sweep over hundreds of crops shares one source
/// raster.
struct Visual {
  std::string path;                     // image file; empty when raster is set
  std::shared_ptr<const Image> raster;  // in-memory pixels; null when path is set
  std::optional<SpatialCrop> crop;      // region of the source actually shown
  int render_side = 0;                  // crop output scale; 0 = source min dimension
  std::optional<int> frame_index;       // ordinal within the source frame sequence
};

enum class TraceMode {
  kFullTrace,       // all generated steps, end-of-sequence included
  kFirstTokenOnly,  // exactly the first generated step
};

struct ScoringRequest {
  std::vector<Visual> visuals;  // may be empty for text-only diagnostics
  std::string prompt;
  int max_new_tokens = 16;
  TraceMode mode = TraceMode::kFullTrace;
};

/// A completed generation: the per-step distributions and the text the
/// backend produced (remote: message content; oracle: the chosen tokens).
struct ScoreOutcome {
  GenerationTrace trace;
  std::string text;
};

// ---------------------------------------------------------------------------
// Error classes. Retriable errors (transport hiccups, timeouts) may be
// retried by the client; the others must surface immediately.
// ---------------------------------------------------------------------------

class BackendError : public std::runtime_error {
public:
  BackendError(std::string message, bool retriable)
      : std::runtime_error(std::move(message)), retriable_(retriable) {}
  bool retriable() const { return retriable_; }

private:
  bool retriable_;
};

/// Connection resets, DNS failures, short reads.
class TransportError : public BackendError {
public:
  explicit TransportError(std::string message) : BackendError(std::move(message), true) {}
};

/// Request exceeded the configured deadline.
class TimeoutError : public BackendError {
public:
  explicit TimeoutError(std::string message) : BackendError(std::move(message), true) {}
};

/// HTTP 401/403; retrying cannot help.
class AuthError : public BackendError {
public:
  explicit AuthError(std::string message) : BackendError(std::move(message), false) {}
};

/// Response parsed but violates the wire contract.
class MalformedResponseError : public BackendError {
public:
  explicit MalformedResponseError(std::string message)
      : BackendError(std::move(message), false) {}
};

/// The endpoint cannot do what we need (e.g. no logprobs support).
class CapabilityError : public BackendError {
public:
  explicit CapabilityError(std::string message) : BackendError(std::move(message), false) {}
};

/// Server answered with HTTP >= 400 (other than auth failures); the request
/// itself is wrong, so retrying cannot help.
class HttpStatusError : public BackendError {
public:
  HttpStatusError(int status, std::string message)
      : BackendError(std::move(message), false), status_(status) {}
  int status() const { return status_; }

private:
  int status_;
};

// ---------------------------------------------------------------------------

class Backend {
public:
  virtual ~Backend() = default;

  /// Produces a trace with >= 1 step (exactly 1 in first-token-only mode)
  /// whose distributions satisfy their invariants. Throws a BackendError
  /// subclass on failure.
  virtual ScoreOutcome score(const ScoringRequest& request) = 0;

  virtual std::string describe() const = 0;
};

struct BackendConfig {
  std::string endpoint_url;
  std::string model_id;
  int top_logprobs_k = 20;
  int max_concurrency = 1;  // >1 is opt-in; many model servers misbehave under batching
  double request_timeout_s = 120.0;
  std::string api_key_source;  // environment variable NAME; the key itself is never stored
  int retry_attempts = 3;
  double retry_initial_delay_s = 1.0;
};

/// Scoring and answering may use different models (e.g. a large judge
/// guiding a smaller generator); pair them explicitly.
struct BackendPair {
  std::shared_ptr<Backend> scorer;
  std::shared_ptr<Backend> answerer;
};

}  // namespace ug
