#include "ug/wire.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace ug {

namespace {

constexpr double kMassTolerance = 1e-6;

const char kBase64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < data.size()) {
    const unsigned v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back(kBase64Chars[(v >> 6) & 63]);
    out.push_back(kBase64Chars[v & 63]);
    i += 3;
  }
  if (i + 1 == data.size()) {
    const unsigned v = data[i] << 16;
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    const unsigned v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back(kBase64Chars[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string mime_for_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
  return "image/png";
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TransportError("cannot read image file " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

std::string visual_data_uri(const Visual& v) {
  if (v.crop) {
    // Crops are rendered here and re-encoded as PNG (lossless and
    // deterministic) regardless of the source format.
    const Image source = v.raster ? *v.raster : load_image(v.path);
    return "data:image/png;base64," +
           base64_encode(encode_png(render_crop(source, *v.crop, v.render_side)));
  }
  if (v.raster) {
    return "data:image/png;base64," + base64_encode(encode_png(*v.raster));
  }
  if (!v.path.empty()) {
    return "data:" + mime_for_path(v.path) + ";base64," + base64_encode(read_file_bytes(v.path));
  }
  throw std::invalid_argument("visual carries neither pixels nor a path");
}

}  // namespace

GenerationTrace decode_trace(const std::vector<WireStep>& steps) {
  if (steps.empty()) throw MalformedResponseError("logprob record list is empty");
  GenerationTrace trace;
  trace.steps.reserve(steps.size());
  trace.chosen_tokens.reserve(steps.size());
  for (std::size_t si = 0; si < steps.size(); ++si) {
    const WireStep& ws = steps[si];
    // Merge duplicate token texts; servers with distinct token ids can
    // report the same surface text twice.
    std::map<std::string, double> probs;
    auto add = [&](const std::string& tok, double logprob) {
      if (logprob > kMassTolerance) {
        throw MalformedResponseError("positive logprob " + std::to_string(logprob) +
                                     " for token '" + tok + "' in step " + std::to_string(si));
      }
      probs[tok] += std::exp(std::min(logprob, 0.0));
    };
    for (const auto& [tok, lp] : ws.top) add(tok, lp);
    if (!probs.count(ws.chosen)) add(ws.chosen, ws.chosen_logprob);

    TokenDistribution dist;
    double total = 0.0;
    dist.entries.reserve(probs.size());
    for (const auto& [tok, p] : probs) {
      dist.entries.push_back(TokenEntry{tok, p});
      total += p;
    }
    if (total > 1.0 + kMassTolerance) {
      throw MalformedResponseError("step " + std::to_string(si) + " probabilities sum to " +
                                   std::to_string(total) + " > 1");
    }
    dist.residual_mass = total < 1.0 ? 1.0 - total : 0.0;
    trace.steps.push_back(std::move(dist));
    trace.chosen_tokens.push_back(ws.chosen);
  }
  trace.validate();
  return trace;
}

Json encode_chat_request(const std::string& model_id, const ScoringRequest& request,
                         int top_logprobs_k) {
  Json content = Json::array();
  for (const auto& v : request.visuals) {
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", visual_data_uri(v)}}}});
  }
  content.push_back({{"type", "text"}, {"text", request.prompt}});

  Json body;
  body["model"] = model_id;
  body["messages"] = Json::array({Json{{"role", "user"}, {"content", content}}});
  body["max_tokens"] =
      request.mode == TraceMode::kFirstTokenOnly ? 1 : request.max_new_tokens;
  body["temperature"] = 0.0;  // greedy decoding keeps scores and answers reproducible
  body["logprobs"] = true;
  body["top_logprobs"] = top_logprobs_k;
  return body;
}

ScoreOutcome decode_chat_response(const Json& body) {
  const auto* choices = body.contains("choices") && body["choices"].is_array() &&
                                !body["choices"].empty()
                            ? &body["choices"][0]
                            : nullptr;
  if (!choices) throw MalformedResponseError("response has no choices");
  const Json& choice = *choices;

  if (!choice.contains("message") || !choice["message"].contains("content")) {
    throw MalformedResponseError("choice has no message content");
  }
  std::string text =
      choice["message"]["content"].is_string() ? choice["message"]["content"].get<std::string>() : "";

  if (!choice.contains("logprobs") || choice["logprobs"].is_null() ||
      !choice["logprobs"].contains("content") || !choice["logprobs"]["content"].is_array()) {
    throw CapabilityError(
        "response carries no 'logprobs.content' records; enable per-token logprob "
        "reporting on the serving endpoint");
  }

  std::vector<WireStep> steps;
  for (const auto& rec : choice["logprobs"]["content"]) {
    if (!rec.contains("token") || !rec.contains("logprob")) {
      throw MalformedResponseError("logprob record missing token/logprob fields");
    }
    WireStep ws;
    ws.chosen = rec["token"].get<std::string>();
    ws.chosen_logprob = rec["logprob"].get<double>();
    if (rec.contains("top_logprobs")) {
      for (const auto& alt : rec["top_logprobs"]) {
        if (!alt.contains("token") || !alt.contains("logprob")) {
          throw MalformedResponseError("top_logprobs record missing token/logprob fields");
        }
        ws.top.emplace_back(alt["token"].get<std::string>(), alt["logprob"].get<double>());
      }
    }
    steps.push_back(std::move(ws));
  }
  return ScoreOutcome{decode_trace(steps), std::move(text)};
}

ScoreOutcome decode_chat_response(const std::string& body_text) {
  Json body = Json::parse(body_text, nullptr, false);
  if (body.is_discarded()) throw MalformedResponseError("response body is not valid JSON");
  return decode_chat_response(body);
}

}  // namespace ug
