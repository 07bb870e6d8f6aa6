// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/backends.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <thread>

#include "httplib.h"

#include "shotad/context.hpp"
#include "shotad/errors.hpp"
#include "shotad/util.hpp"

namespace shotad {

namespace {

using nlohmann::ordered_json;

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// First substring delimited by `open`..`close` after `marker`, or "".
std::string between(const std::string& text, const std::string& marker,
                    char open, char close) {
  auto at = text.find(marker);
  if (at == std::string::npos) return "";
  at += marker.size();
  if (at >= text.size() || text[at] != open) return "";
  auto end = text.find(close, at + 1);
  if (end == std::string::npos) return "";
  return text.substr(at + 1, end - at - 1);
}

double jaccard(const std::string& a, const std::string& b) {
  auto ta = tokenize_words(a);
  auto tb = tokenize_words(b);
  std::set<std::string> sa(ta.begin(), ta.end());
  std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& w : sa) inter += sb.count(w);
  std::size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

std::string trim_to_words(const std::string& text, long long limit) {
  if (limit <= 0) return text;
  auto parts = split_whitespace(text);
  if (static_cast<long long>(parts.size()) <= limit) return text;
  parts.resize(static_cast<std::size_t>(limit));
  std::string out = join(parts, " ");
  if (!out.empty() && out.back() != '.' && out.back() != '!' &&
      out.back() != '?')
    out += ".";
  return out;
}

long long word_limit_from_prompt(const std::string& user_text) {
  const std::string marker = "within ";
  auto at = user_text.find(marker);
  while (at != std::string::npos) {
    auto digits = at + marker.size();
    auto end = digits;
    while (end < user_text.size() && std::isdigit(
               static_cast<unsigned char>(user_text[end])))
      ++end;
    if (end > digits && user_text.compare(end, 6, " words") == 0) {
      return std::stoll(user_text.substr(digits, end - digits));
    }
    at = user_text.find(marker, at + 1);
  }
  return 0;
}

std::string description_block(const std::string& user_text) {
  const std::string marker = "Description: ";
  auto at = user_text.find(marker);
  if (at == std::string::npos) return "";
  at += marker.size();
  auto end = user_text.find("\n\n", at);
  if (end == std::string::npos) end = user_text.size();
  return user_text.substr(at, end - at);
}

const char* const kStyles[8] = {"",           "Meanwhile, ",     "Then ",
                                "Moments later, ", "Nearby, ",   "Slowly, ",
                                "Quietly, ",  "Suddenly, "};

std::vector<std::string> mock_split_subsentences(const std::string& input) {
  std::string body = trim(input);
  while (!body.empty() && (body.back() == '.' || body.back() == '!' ||
                           body.back() == '?'))
    body.pop_back();
  static const char* const kDelims[] = {", then ", " then ", ", and ",
                                        " and "};
  std::vector<std::string> parts = {body};
  for (const char* d : kDelims) {
    std::vector<std::string> next;
    for (const auto& p : parts) {
      std::size_t from = 0;
      std::string dl = d;
      for (auto at = p.find(dl); at != std::string::npos;
           at = p.find(dl, from)) {
        next.push_back(p.substr(from, at - from));
        from = at + dl.size();
      }
      next.push_back(p.substr(from));
    }
    parts = std::move(next);
  }
  std::vector<std::string> out;
  for (auto& p : parts) {
    auto t = trim(p);
    if (!t.empty()) out.push_back(t + ".");
  }
  if (out.empty()) out.push_back(trim(input));
  return out;
}

bool has_keys(const std::vector<std::string>& keys,
              std::initializer_list<const char*> want) {
  if (keys.size() != want.size()) return false;
  for (const char* w : want)
    if (std::find(keys.begin(), keys.end(), w) == keys.end()) return false;
  return true;
}

bool is_joint_summary(const std::vector<std::string>& keys) {
  if (keys.size() != 5) return false;
  for (int i = 1; i <= 5; ++i)
    if (std::find(keys.begin(), keys.end(),
                  "summarized_AD_" + std::to_string(i)) == keys.end())
      return false;
  return true;
}

}  // namespace

void BackendStats::merge(const BackendStats& other) {
  videollm_calls += other.videollm_calls;
  llm_calls += other.llm_calls;
  embed_calls += other.embed_calls;
  parse_calls += other.parse_calls;
  feature_extracts += other.feature_extracts;
}

ordered_json BackendStats::to_json() const {
  return ordered_json{{"videollm_calls", videollm_calls},
                      {"llm_calls", llm_calls},
                      {"embed_calls", embed_calls},
                      {"parse_calls", parse_calls},
                      {"feature_extracts", feature_extracts}};
}

void validate(const BackendConfig& cfg) {
  if (!(cfg.sampling.top_p > 0.0) || cfg.sampling.top_p > 1.0)
    throw ConfigError("backend config: top_p must be in (0, 1]");
  if (cfg.sampling.temperature < 0.0)
    throw ConfigError("backend config: temperature must be >= 0");
  if (cfg.retry.max_attempts < 1)
    throw ConfigError("backend config: max_attempts must be >= 1");
  if (cfg.retry.backoff_seconds < 0.0)
    throw ConfigError("backend config: backoff_seconds must be >= 0");
  if (cfg.requests_per_minute < 0)
    throw ConfigError("backend config: requests_per_minute must be >= 0");
  if (cfg.max_concurrency < 0)
    throw ConfigError("backend config: max_concurrency must be >= 0");
}

std::string videollm_generate(VideoLlmBackend& backend,
                              const std::vector<Image>& frames,
                              const PromptBundle& prompt,
                              BackendStats* stats) {
  if (frames.empty())
    throw Error("videollm_generate: at least one frame is required");
  if (stats) ++stats->videollm_calls;
  std::string out = backend.generate(frames, prompt);
  if (trim(out).empty())
    throw BackendError("videollm backend returned an empty completion");
  return out;
}

std::string llm_generate(LlmBackend& backend, const PromptBundle& prompt,
                         const SamplingParams& params, BackendStats* stats) {
  if (prompt.user_text.empty())
    throw Error("llm_generate: empty user prompt");
  if (stats) ++stats->llm_calls;
  std::string out = backend.generate(prompt, params);
  if (trim(out).empty())
    throw BackendError("llm backend returned an empty completion");
  return out;
}

std::vector<std::vector<double>> embed_text(EmbeddingBackend& backend,
                                            const std::vector<std::string>& texts,
                                            const std::string& instruction,
                                            BackendStats* stats) {
  if (texts.empty()) return {};
  if (stats) ++stats->embed_calls;
  auto vecs = backend.embed(texts, instruction);
  if (vecs.size() != texts.size())
    throw BackendError("embedding backend returned " +
                       std::to_string(vecs.size()) + " vectors for " +
                       std::to_string(texts.size()) + " texts");
  const std::size_t dims = vecs.empty() ? 0 : vecs.front().size();
  for (const auto& v : vecs) {
    if (v.size() != dims)
      throw BackendError("embedding backend returned ragged dimensions");
    double norm2 = 0.0;
    for (double x : v) {
      if (!std::isfinite(x))
        throw BackendError("embedding backend returned a non-finite value");
      norm2 += x * x;
    }
    if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-6)
      throw BackendError("embedding backend returned a non-unit vector");
  }
  return vecs;
}

std::vector<ActionPhrase> parse_actions(ParserBackend& backend,
                                        const std::string& sentence,
                                        BackendStats* stats) {
  if (stats) ++stats->parse_calls;
  return backend.parse(sentence);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---- JSON answer extraction ----

namespace {

// Rewrites single-quoted string delimiters to double quotes. Quotes are
// treated as delimiters only next to JSON structure, so apostrophes inside
// values survive.
std::string requote(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_dq = false;
  bool in_sq = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_dq) {
      out += c;
      if (c == '\\' && i + 1 < text.size()) {
        out += text[++i];
      } else if (c == '"') {
        in_dq = false;
      }
      continue;
    }
    if (in_sq) {
      if (c == '\'') {
        std::size_t j = i + 1;
        while (j < text.size() &&
               std::isspace(static_cast<unsigned char>(text[j])))
          ++j;
        if (j >= text.size() || text[j] == ',' || text[j] == '}' ||
            text[j] == ']' || text[j] == ':') {
          out += '"';
          in_sq = false;
        } else {
          out += "\\'";
        }
      } else if (c == '"') {
        out += "\\\"";
      } else if (c == '\\') {
        out += c;
        if (i + 1 < text.size()) out += text[++i];
      } else if (c == '\n') {
        out += "\\n";
      } else {
        out += c;
      }
      continue;
    }
    if (c == '"') {
      in_dq = true;
      out += c;
    } else if (c == '\'') {
      std::size_t j = out.size();
      while (j > 0 && std::isspace(static_cast<unsigned char>(out[j - 1])))
        --j;
      char prev = j > 0 ? out[j - 1] : '{';
      if (prev == '{' || prev == ',' || prev == ':' || prev == '[') {
        out += '"';
        in_sq = true;
      } else {
        out += c;
      }
    } else {
      out += c;
    }
  }
  return out;
}

bool try_parse_object(const std::string& text,
                      const std::vector<std::string>& required_keys,
                      ordered_json* out) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    j = ordered_json::parse(requote(text), nullptr, false);
    if (j.is_discarded()) return false;
  }
  if (!j.is_object()) return false;
  for (const auto& k : required_keys)
    if (!j.contains(k)) return false;
  *out = std::move(j);
  return true;
}

}  // namespace

ordered_json parse_json_answer(const std::string& text,
                               const std::vector<std::string>& required_keys) {
  for (std::size_t start = text.find('{'); start != std::string::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_dq = false, in_sq = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      char c = text[i];
      if (in_dq) {
        if (c == '\\')
          ++i;
        else if (c == '"')
          in_dq = false;
        continue;
      }
      if (in_sq) {
        if (c == '\\')
          ++i;
        else if (c == '\'')
          in_sq = false;
        continue;
      }
      if (c == '"') {
        in_dq = true;
      } else if (c == '\'') {
        in_sq = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          ordered_json obj;
          if (try_parse_object(text.substr(start, i - start + 1),
                               required_keys, &obj))
            return obj;
          break;
        }
      }
    }
  }
  std::string keys = join(required_keys, ", ");
  throw ValidationError("completion has no JSON object with keys [" + keys +
                        "]");
}

ordered_json llm_generate_json(LlmBackend& backend, const PromptBundle& prompt,
                               const SamplingParams& params,
                               BackendStats* stats) {
  std::string first = llm_generate(backend, prompt, params, stats);
  try {
    return parse_json_answer(first, prompt.answer_keys);
  } catch (const ValidationError&) {
  }
  PromptBundle retry = prompt;
  retry.user_text +=
      "\nYour previous reply was not valid JSON. Respond with the JSON "
      "object only.";
  std::string second = llm_generate(backend, retry, params, stats);
  try {
    return parse_json_answer(second, prompt.answer_keys);
  } catch (const ValidationError& e) {
    throw BackendError(std::string("llm backend kept returning malformed "
                                   "JSON: ") +
                           e.what(),
                       2);
  }
}

// ---- Deterministic local backends ----

std::string MockLlm::generate(const PromptBundle& prompt,
                              const SamplingParams& params) {
  const auto& keys = prompt.answer_keys;
  if (has_keys(keys, {"Output"})) {
    std::string input = between(prompt.user_text, "Input sentence: ", '"',
                                '"');
    return ordered_json{{"Output", input}}.dump();
  }
  if (has_keys(keys, {"Subsentences"})) {
    std::string input = between(prompt.user_text, "Input sentence: ", '"',
                                '"');
    ordered_json arr = ordered_json::array();
    for (const auto& s : mock_split_subsentences(input)) arr.push_back(s);
    return ordered_json{{"Subsentences", arr}}.dump();
  }
  if (has_keys(keys, {"summarized_AD"})) {
    std::string desc = description_block(prompt.user_text);
    auto sentences = split_sentences(desc);
    std::string base = sentences.empty() ? trim(desc) : sentences.front();
    std::string style =
        params.temperature > 0.0 ? kStyles[params.seed % 8] : "";
    long long limit = word_limit_from_prompt(prompt.user_text);
    return ordered_json{{"summarized_AD", trim_to_words(style + base, limit)}}
        .dump();
  }
  if (is_joint_summary(keys)) {
    std::string desc = description_block(prompt.user_text);
    auto sentences = split_sentences(desc);
    if (sentences.empty()) sentences.push_back(trim(desc));
    long long limit = word_limit_from_prompt(prompt.user_text);
    ordered_json out;
    for (int i = 1; i <= 5; ++i) {
      std::string text = std::string(kStyles[i - 1]) +
                         sentences[(i - 1) % sentences.size()];
      out["summarized_AD_" + std::to_string(i)] = trim_to_words(text, limit);
    }
    return out.dump();
  }
  if (has_keys(keys, {"score", "explanation"})) {
    std::string ref = between(prompt.user_text, "# Reference (Ref): ", '\'',
                              '\'');
    auto at = prompt.user_text.find("# Description (Des): ");
    std::string des;
    if (at != std::string::npos) {
      auto open = prompt.user_text.find('\'', at);
      auto close = prompt.user_text.rfind('\'');
      if (open != std::string::npos && close > open)
        des = prompt.user_text.substr(open + 1, close - open - 1);
    }
    double j = jaccard(ref, des);
    int score = j >= 0.99 ? 3 : j > 0.5 ? 2 : j > 0.15 ? 1 : 0;
    return ordered_json{{"score", score},
                        {"explanation", "Token overlap between Ref and Des "
                                        "is " + fmt2(j) + "."}}
        .dump();
  }
  if (has_keys(keys, {"score"})) {
    std::string ref = between(prompt.user_text, "Ground truth: ", '"', '"');
    std::string cand = between(prompt.user_text, "Candidate: ", '"', '"');
    int score;
    if (trim(ref) == trim(cand)) {
      score = 5;
    } else {
      double j = jaccard(ref, cand);
      score = j > 0.6 ? 4 : j > 0.3 ? 3 : j > 0.1 ? 2 : 1;
    }
    return ordered_json{{"score", score}}.dump();
  }
  if (prompt.expects_json) {
    ordered_json out;
    for (const auto& k : keys) out[k] = "ok";
    return out.dump();
  }
  return "Mock reply " + hex64(prompt.hash()) + ".";
}

std::string ScriptedLlm::generate(const PromptBundle& prompt,
                                  const SamplingParams& params) {
  (void)prompt;
  (void)params;
  if (next_ >= responses_.size())
    throw BackendError("scripted llm exhausted after " +
                       std::to_string(responses_.size()) + " responses");
  return responses_[next_++];
}

std::string MockVideoLlm::generate(const std::vector<Image>& frames,
                                   const PromptBundle& prompt) {
  return "A man in a gray coat enters the room and sets a folder on the "
         "desk. A woman near the window turns toward him. They exchange a "
         "brief look. Frames observed: " +
         std::to_string(frames.size()) + "; instruction digest " +
         hex64(prompt.hash()) + ".";
}

std::vector<std::vector<double>> HashedBagEmbedding::embed(
    const std::vector<std::string>& texts, const std::string& instruction) {
  (void)instruction;
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> v(static_cast<std::size_t>(dims_), 0.0);
    for (const auto& tok : tokenize_words(text))
      v[fnv1a(lemmatize_verb(tok)) % static_cast<std::uint64_t>(dims_)] +=
          1.0;
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 == 0.0) {
      v[0] = 1.0;
    } else {
      double inv = 1.0 / std::sqrt(norm2);
      for (double& x : v) x *= inv;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<ActionPhrase> RuleParser::parse(const std::string& sentence) {
  return extract_action_phrases(sentence);
}

FeatureMap MockFeatureExtractor::extract(const Image& frame) {
  constexpr int kColors = 8;
  constexpr int kChannels = kColors + 1;
  constexpr double kBias = 0.25;
  FeatureMap map;
  map.h = 2;
  map.w = 2;
  map.c = kChannels;
  map.data.assign(4 * kChannels, 0.0f);
  for (int qy = 0; qy < 2; ++qy) {
    for (int qx = 0; qx < 2; ++qx) {
      const int x0 = qx * frame.width / 2;
      const int x1 = qx == 0 ? frame.width / 2 : frame.width;
      const int y0 = qy * frame.height / 2;
      const int y1 = qy == 0 ? frame.height / 2 : frame.height;
      double sr = 0.0, sg = 0.0, sb = 0.0;
      long long n = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const std::uint8_t* p = frame.px(x, y);
          sr += p[0];
          sg += p[1];
          sb += p[2];
          ++n;
        }
      }
      if (n == 0) n = 1;
      const double mr = sr / n, mg = sg / n, mb = sb / n;
      int best = 0;
      double best_d2 = 1e18;
      for (int k = 0; k < kColors; ++k) {
        Rgb c = color_for_track(k);
        const double dr = mr - c.r, dg = mg - c.g, db = mb - c.b;
        const double d2 = dr * dr + dg * dg + db * db;
        if (d2 < best_d2) {
          best_d2 = d2;
          best = k;
        }
      }
      float* f = map.data.data() + (qy * 2 + qx) * kChannels;
      f[best] = 1.0f;
      f[kColors] = static_cast<float>(kBias);
    }
  }
  return map;
}

// ---- Remote client ----

HttpResponse HttpTransport::post(const std::string& endpoint,
                                 const std::map<std::string, std::string>& headers,
                                 const std::string& body) {
  auto slash = endpoint.find('/', endpoint.find("//") == std::string::npos
                                      ? 0
                                      : endpoint.find("//") + 2);
  std::string base =
      slash == std::string::npos ? endpoint : endpoint.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : endpoint.substr(slash);
  httplib::Client client(base);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(120, 0);
  httplib::Headers h(headers.begin(), headers.end());
  auto res = client.Post(path, h, body, "application/json");
  if (!res)
    throw TransientBackendError("connection to " + base + " failed: " +
                                httplib::to_string(res.error()));
  return {res->status, res->body};
}

TokenBucket::TokenBucket(int per_minute)
    : per_minute_(per_minute),
      tokens_(per_minute > 0 ? 1.0 : 0.0),
      last_ns_(std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
                   .count()) {}

void TokenBucket::acquire() {
  if (per_minute_ <= 0) return;
  const double rate = per_minute_ / 60.0e9;  // tokens per ns
  for (;;) {
    double wait_ns;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const std::uint64_t now =
          std::chrono::duration_cast<std::chrono::nanoseconds>(
              std::chrono::steady_clock::now().time_since_epoch())
              .count();
      tokens_ = std::min(1.0, tokens_ + (now - last_ns_) * rate);
      last_ns_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait_ns = (1.0 - tokens_) / rate;
    }
    std::this_thread::sleep_for(
        std::chrono::nanoseconds(static_cast<std::uint64_t>(wait_ns) + 1));
  }
}

std::string with_retries(const RetryPolicy& policy,
                         const std::function<std::string()>& fn) {
  std::string last_error;
  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    try {
      return fn();
    } catch (const TransientBackendError& e) {
      last_error = e.what();
      if (attempt == policy.max_attempts) break;
      const double delay =
          policy.backoff_seconds * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
  }
  throw BackendError("backend failed after " +
                         std::to_string(policy.max_attempts) +
                         " attempts: " + last_error,
                     policy.max_attempts);
}

namespace {

void check_remote_config(const BackendConfig& cfg) {
  validate(cfg);
  if (cfg.endpoint.empty())
    throw ConfigError("remote backend requires an endpoint");
  if (cfg.credential_env.empty())
    throw ConfigError("remote backend requires credential_env");
}

std::unique_ptr<TokenBucket> make_bucket(const BackendConfig& cfg) {
  if (cfg.requests_per_minute <= 0) return nullptr;
  return std::make_unique<TokenBucket>(cfg.requests_per_minute);
}

// One POST with retries; the body is reused across attempts. The bearer
// credential is resolved at call time and lives only in the header map.
std::string remote_call(const BackendConfig& cfg, Transport& transport,
                        TokenBucket* bucket, const std::string& body) {
  const char* cred = std::getenv(cfg.credential_env.c_str());
  if (cred == nullptr || *cred == '\0')
    throw ConfigError("environment variable " + cfg.credential_env +
                      " is not set");
  std::map<std::string, std::string> headers{
      {"Authorization", std::string("Bearer ") + cred}};
  return with_retries(cfg.retry, [&]() -> std::string {
    if (bucket) bucket->acquire();
    HttpResponse res = transport.post(cfg.endpoint, headers, body);
    if (res.status == 429 || res.status >= 500)
      throw TransientBackendError("endpoint returned HTTP " +
                                  std::to_string(res.status));
    if (res.status != 200)
      throw BackendError("endpoint returned HTTP " +
                         std::to_string(res.status));
    return res.body;
  });
}

std::string text_of_response(const std::string& body) {
  ordered_json parsed = ordered_json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("text") ||
      !parsed["text"].is_string())
    throw BackendError("endpoint response lacks a text field");
  return parsed["text"].get<std::string>();
}

}  // namespace

RemoteLlm::RemoteLlm(BackendConfig cfg, Transport& transport)
    : cfg_(std::move(cfg)), transport_(transport) {
  check_remote_config(cfg_);
  bucket_ = make_bucket(cfg_);
}

std::string RemoteLlm::generate(const PromptBundle& prompt,
                                const SamplingParams& params) {
  ordered_json req{{"kind", "llm"},
                   {"model", cfg_.model},
                   {"system", prompt.system_text},
                   {"user", prompt.user_text},
                   {"top_p", params.top_p},
                   {"temperature", params.temperature},
                   {"seed", params.seed}};
  return text_of_response(
      remote_call(cfg_, transport_, bucket_.get(), req.dump()));
}

RemoteVideoLlm::RemoteVideoLlm(BackendConfig cfg, Transport& transport)
    : cfg_(std::move(cfg)), transport_(transport) {
  check_remote_config(cfg_);
  bucket_ = make_bucket(cfg_);
}

std::string RemoteVideoLlm::generate(const std::vector<Image>& frames,
                                     const PromptBundle& prompt) {
  ordered_json frame_list = ordered_json::array();
  for (const auto& f : frames)
    frame_list.push_back(base64_encode(ppm_bytes(f)));
  ordered_json req{{"kind", "videollm"},
                   {"model", cfg_.model},
                   {"system", prompt.system_text},
                   {"user", prompt.user_text},
                   {"frames", std::move(frame_list)}};
  return text_of_response(
      remote_call(cfg_, transport_, bucket_.get(), req.dump()));
}

RemoteEmbedding::RemoteEmbedding(BackendConfig cfg, Transport& transport)
    : cfg_(std::move(cfg)), transport_(transport) {
  check_remote_config(cfg_);
  bucket_ = make_bucket(cfg_);
}

std::vector<std::vector<double>> RemoteEmbedding::embed(
    const std::vector<std::string>& texts, const std::string& instruction) {
  ordered_json req{{"kind", "embedding"},
                   {"model", cfg_.model},
                   {"instruction", instruction},
                   {"texts", texts}};
  const std::string body =
      remote_call(cfg_, transport_, bucket_.get(), req.dump());
  ordered_json parsed = ordered_json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("vectors") ||
      !parsed["vectors"].is_array())
    throw BackendError("endpoint response lacks a vectors field");
  std::vector<std::vector<double>> out;
  for (const auto& row : parsed["vectors"]) {
    if (!row.is_array())
      throw BackendError("endpoint vectors row is not an array");
    out.push_back(row.get<std::vector<double>>());
  }
  return out;
}

}  // namespace shotad
