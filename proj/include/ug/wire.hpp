#pragma once

/**
 * @file wire.hpp
 * @brief Chat-completions wire format: request encoding and logprob
 *        response decoding.
 *
 * The protocol is the JSON chat-completion shape: the request carries a
 * model id, one user message mixing text and base64 data-URI image parts,
 * and flags asking for per-token log-probabilities with K alternatives.
 * The response carries choices[0].message.content plus
 * choices[0].logprobs.content, a list of per-step records each holding the
 * sampled token and its top-K alternatives.
 */

#include "ug/backend.hpp"
#include "ug/uncertainty.hpp"

#include "ug/json.hpp"

#include <string>
#include <vector>

namespace ug {

/// One decoding step as reported on the wire.
struct WireStep {
  std::string chosen;                                   // sampled token text
  double chosen_logprob = 0.0;                          // its log-probability
  std::vector<std::pair<std::string, double>> top;      // top-K (token, logprob)
};

/// Converts per-step (token, logprob) records into a GenerationTrace:
/// probabilities are exp(logprob), duplicate token texts merge by summing,
/// the sampled token is added if the top-K list omitted it, and the
/// uncovered mass becomes the residual outcome. Throws
/// MalformedResponseError when logprobs are positive or the reported mass
/// exceeds 1 beyond tolerance.
GenerationTrace decode_trace(const std::vector<WireStep>& steps);

/// Builds the request body for one scoring call. Images referenced by path
/// are inlined verbatim (their bytes are already PNG/JPEG); in-memory
/// rasters are encoded as PNG first.
Json encode_chat_request(const std::string& model_id, const ScoringRequest& request,
                         int top_logprobs_k);

/// Parses a chat-completion response body into (trace, message text).
/// Throws MalformedResponseError for structurally broken bodies and
/// CapabilityError when the logprobs field is absent (the server must be
/// started with logprob reporting enabled).
ScoreOutcome decode_chat_response(const Json& body);

ScoreOutcome decode_chat_response(const std::string& body_text);

}  // namespace ug
