#pragma once

/**
 * @file uncertainty.hpp
 * @brief Token-level uncertainty scores: Shannon entropy, sequence-mean
 *        entropy, and the binary response confidence (BRC) score.
 *
 * All scores are computed from per-step token probability distributions as
 * reported by a backend. Backends that truncate to top-K alternatives leave
 * probability mass uncovered; that leftover is modeled as a single residual
 * pseudo-outcome so the distribution still sums to one. Entropy is reported
 * in nats (natural log).
 *
 * Everything here is a pure function over immutable inputs; safe to call
 * concurrently.
 */

#include <string>
#include <string_view>
#include <vector>

namespace ug {

/// One (token text, probability) pair of a decoding step's distribution.
struct TokenEntry {
  std::string text;
  double prob = 0.0;
};

/// Probability mass over tokens for one decoding step. `residual_mass` is
/// the mass not covered by `entries` (e.g. everything outside a reported
/// top-K), treated as one aggregate outcome.
struct TokenDistribution {
  std::vector<TokenEntry> entries;
  double residual_mass = 0.0;

  /// Throws std::invalid_argument unless: every probability and the residual
  /// are in [0,1], the total mass is 1 within 1e-6, and token texts are
  /// unique.
  void validate() const;
};

/// Ordered per-step distributions for a generated sequence, together with
/// the token actually emitted at each step (end-of-sequence marker included).
struct GenerationTrace {
  std::vector<TokenDistribution> steps;
  std::vector<std::string> chosen_tokens;

  /// Throws std::invalid_argument unless the trace is non-empty, steps and
  /// chosen tokens line up, every step validates, and each chosen token is
  /// either listed in its step or representable by positive residual mass.
  void validate() const;
};

/// Shannon entropy in nats over entries plus the residual outcome.
/// Zero-probability outcomes contribute nothing (0·ln 0 := 0).
double shannon_entropy(const TokenDistribution& dist);

/// Arithmetic mean of shannon_entropy across every step of the trace,
/// end-of-sequence step included. Lower values mean a more confident
/// generation. Throws on an empty trace.
double mean_token_entropy(const GenerationTrace& trace);

/// Canonical form used for alias matching: leading/trailing whitespace and
/// tokenizer space markers stripped, then ASCII-lowercased. Tokenizers emit
/// " A", "A", "▁A" (SentencePiece) or "ĠA" (BPE) for the same
/// surface form; the canonical form makes them compare equal.
std::string normalize_token(std::string_view token);

/// Total probability of entries whose normalized text matches any alias
/// (aliases are normalized the same way). 0 when nothing matches.
double token_prob_lookup(const TokenDistribution& dist,
                         const std::vector<std::string>& aliases);

/// Binary response confidence: P(yes-side) - P(no-side) in [-1, 1], where
/// each side sums the probabilities of alias-matching entries. A high
/// positive value means strong confidence in the positive answer.
/// Throws if either alias set is empty or the sets overlap after
/// normalization.
double brc_score(const TokenDistribution& dist,
                 const std::vector<std::string>& yes_aliases,
                 const std::vector<std::string>& no_aliases);

}  // namespace ug
