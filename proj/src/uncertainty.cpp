#include "ug/uncertainty.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ug {

namespace {

constexpr double kMassTolerance = 1e-6;

bool in_unit_interval(double p) { return p >= 0.0 && p <= 1.0; }

// Strips one leading/trailing space marker at a time until none remain.
// Handles ASCII whitespace plus the multi-byte markers U+2581 (SentencePiece
// "lower one eighth block") and U+0120 (byte-level BPE "G-dot").
bool strip_one_prefix(std::string_view& s) {
  if (s.empty()) return false;
  unsigned char c = static_cast<unsigned char>(s.front());
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    s.remove_prefix(1);
    return true;
  }
  if (s.size() >= 3 && c == 0xe2 && static_cast<unsigned char>(s[1]) == 0x96 &&
      static_cast<unsigned char>(s[2]) == 0x81) {
    s.remove_prefix(3);
    return true;
  }
  if (s.size() >= 2 && c == 0xc4 && static_cast<unsigned char>(s[1]) == 0xa0) {
    s.remove_prefix(2);
    return true;
  }
  return false;
}

bool strip_one_suffix(std::string_view& s) {
  if (s.empty()) return false;
  unsigned char c = static_cast<unsigned char>(s.back());
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    s.remove_suffix(1);
    return true;
  }
  return false;
}

std::unordered_set<std::string> normalize_set(const std::vector<std::string>& aliases) {
  std::unordered_set<std::string> out;
  for (const auto& a : aliases) out.insert(normalize_token(a));
  return out;
}

}  // namespace

void TokenDistribution::validate() const {
  double total = residual_mass;
  if (!in_unit_interval(residual_mass)) {
    throw std::invalid_argument("token distribution: residual mass outside [0,1]");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& e : entries) {
    if (!in_unit_interval(e.prob)) {
      throw std::invalid_argument("token distribution: probability outside [0,1]");
    }
    if (!seen.insert(e.text).second) {
      throw std::invalid_argument("token distribution: duplicate token text '" + e.text + "'");
    }
    total += e.prob;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("token distribution: mass sums to " + std::to_string(total) +
                                ", expected 1 within 1e-6");
  }
}

void GenerationTrace::validate() const {
  if (steps.empty()) throw std::invalid_argument("generation trace: empty");
  if (steps.size() != chosen_tokens.size()) {
    throw std::invalid_argument("generation trace: steps and chosen tokens differ in length");
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    steps[i].validate();
    bool found = false;
    for (const auto& e : steps[i].entries) {
      if (e.text == chosen_tokens[i]) {
        found = true;
        break;
      }
    }
    if (!found && steps[i].residual_mass <= 0.0) {
      throw std::invalid_argument("generation trace: chosen token '" + chosen_tokens[i] +
                                  "' absent from step " + std::to_string(i) +
                                  " and no residual mass to account for it");
    }
  }
}

double shannon_entropy(const TokenDistribution& dist) {
  dist.validate();
  double h = 0.0;
  for (const auto& e : dist.entries) {
    if (e.prob > 0.0) h -= e.prob * std::log(e.prob);
  }
  if (dist.residual_mass > 0.0) h -= dist.residual_mass * std::log(dist.residual_mass);
  return h < 0.0 ? 0.0 : h;  // guard against -0.0 and rounding below zero
}

double mean_token_entropy(const GenerationTrace& trace) {
  if (trace.steps.empty()) throw std::invalid_argument("mean_token_entropy: empty trace");
  double sum = 0.0;
  for (const auto& step : trace.steps) sum += shannon_entropy(step);
  return sum / static_cast<double>(trace.steps.size());
}

std::string normalize_token(std::string_view token) {
  while (strip_one_prefix(token)) {
  }
  while (strip_one_suffix(token)) {
  }
  std::string out;
  out.reserve(token.size());
  for (char ch : token) {
    unsigned char c = static_cast<unsigned char>(ch);
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
  }
  return out;
}

double token_prob_lookup(const TokenDistribution& dist,
                         const std::vector<std::string>& aliases) {
  dist.validate();
  const auto wanted = normalize_set(aliases);
  double p = 0.0;
  for (const auto& e : dist.entries) {
    if (wanted.count(normalize_token(e.text))) p += e.prob;
  }
  return p;
}

double brc_score(const TokenDistribution& dist,
                 const std::vector<std::string>& yes_aliases,
                 const std::vector<std::string>& no_aliases) {
  if (yes_aliases.empty() || no_aliases.empty()) {
    throw std::invalid_argument("brc_score: alias sets must be non-empty");
  }
  const auto yes = normalize_set(yes_aliases);
  const auto no = normalize_set(no_aliases);
  for (const auto& a : yes) {
    if (no.count(a)) {
      throw std::invalid_argument("brc_score: alias '" + a + "' appears on both sides");
    }
  }
  dist.validate();
  double p_yes = 0.0, p_no = 0.0;
  for (const auto& e : dist.entries) {
    const std::string n = normalize_token(e.text);
    if (yes.count(n)) p_yes += e.prob;
    else if (no.count(n)) p_no += e.prob;
  }
  // The mass-sum tolerance lets a one-sided total reach 1 + 1e-6, so the
  // difference is clamped back into its range. Symmetric clamping keeps
  // swap negation exact.
  const double s = p_yes - p_no;
  return s > 1.0 ? 1.0 : (s < -1.0 ? -1.0 : s);
}

}  // namespace ug
