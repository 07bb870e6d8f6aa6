// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "shotad/errors.hpp"
#include "shotad/image.hpp"
#include "shotad/prompts.hpp"
#include "shotad/scales.hpp"
#include "shotad/textproc.hpp"
#include "shotad/threads.hpp"

namespace shotad {

struct SamplingParams {
  double top_p = 1.0;
  double temperature = 0.0;
  std::uint64_t seed = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  double backoff_seconds = 0.5;  // doubles per attempt
};

struct BackendConfig {
  std::string kind;        // videollm | llm | text_embedding | parser |
                           // scale_classifier | feature_extractor
  std::string endpoint;
  std::string credential_env;  // name of the env var, never its value
  std::string model;
  SamplingParams sampling;
  RetryPolicy retry;
  int requests_per_minute = 0;  // 0 = unlimited
  int max_concurrency = 0;      // 0 = unbounded, 1 = serialize
};

void validate(const BackendConfig& cfg);

// Call counters, incremented by the validated entry points below.
struct BackendStats {
  std::int64_t videollm_calls = 0;
  std::int64_t llm_calls = 0;
  std::int64_t embed_calls = 0;
  std::int64_t parse_calls = 0;
  std::int64_t feature_extracts = 0;
  void merge(const BackendStats& other);
  nlohmann::ordered_json to_json() const;
};

// Transient faults are retried; everything else propagates immediately.
class TransientBackendError : public Error {
 public:
  using Error::Error;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string generate(const PromptBundle& prompt,
                               const SamplingParams& params) = 0;
  virtual std::string id() const = 0;
};

class VideoLlmBackend {
 public:
  virtual ~VideoLlmBackend() = default;
  virtual std::string generate(const std::vector<Image>& frames,
                               const PromptBundle& prompt) = 0;
  virtual std::string id() const = 0;
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts,
      const std::string& instruction) = 0;
  virtual std::string id() const = 0;
};

class ParserBackend {
 public:
  virtual ~ParserBackend() = default;
  virtual std::vector<ActionPhrase> parse(const std::string& sentence) = 0;
  virtual std::string id() const = 0;
};

// Validated entry points. They enforce the interface contracts (nonempty
// completions, unit-norm embeddings) regardless of the backend behind them.
std::string videollm_generate(VideoLlmBackend& backend,
                              const std::vector<Image>& frames,
                              const PromptBundle& prompt,
                              BackendStats* stats = nullptr);
std::string llm_generate(LlmBackend& backend, const PromptBundle& prompt,
                         const SamplingParams& params,
                         BackendStats* stats = nullptr);
std::vector<std::vector<double>> embed_text(
    EmbeddingBackend& backend, const std::vector<std::string>& texts,
    const std::string& instruction, BackendStats* stats = nullptr);
std::vector<ActionPhrase> parse_actions(ParserBackend& backend,
                                        const std::string& sentence,
                                        BackendStats* stats = nullptr);

// Extracts the first balanced JSON object in `text` that carries every
// required key. Tolerates surrounding prose and single-quoted objects.
nlohmann::ordered_json parse_json_answer(
    const std::string& text, const std::vector<std::string>& required_keys);

// generate + parse_json_answer with one format-reminder retry.
nlohmann::ordered_json llm_generate_json(LlmBackend& backend,
                                         const PromptBundle& prompt,
                                         const SamplingParams& params,
                                         BackendStats* stats = nullptr);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// ---- Deterministic local backends ----

// Schema-aware rule follower: answers every prompt built by this toolkit
// with plausible, deterministic text. Sampling params vary the phrasing.
class MockLlm : public LlmBackend {
 public:
  std::string generate(const PromptBundle& prompt,
                       const SamplingParams& params) override;
  std::string id() const override { return "mock-llm"; }
};

// Replays a fixed list of responses; complains when exhausted.
class ScriptedLlm : public LlmBackend {
 public:
  explicit ScriptedLlm(std::vector<std::string> responses)
      : responses_(std::move(responses)) {}
  std::string generate(const PromptBundle& prompt,
                       const SamplingParams& params) override;
  std::string id() const override { return "scripted-llm"; }
  std::size_t consumed() const { return next_; }

 private:
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
};

class MockVideoLlm : public VideoLlmBackend {
 public:
  std::string generate(const std::vector<Image>& frames,
                       const PromptBundle& prompt) override;
  std::string id() const override { return "mock-videollm"; }
};

// Hashed bag-of-lemmas embedding: identical texts agree exactly, texts with
// disjoint vocabulary are orthogonal up to hash collisions.
class HashedBagEmbedding : public EmbeddingBackend {
 public:
  explicit HashedBagEmbedding(int dims = 256) : dims_(dims) {}
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts,
      const std::string& instruction) override;
  std::string id() const override { return "hashed-bag-embedding"; }

 private:
  int dims_;
};

class RuleParser : public ParserBackend {
 public:
  std::vector<ActionPhrase> parse(const std::string& sentence) override;
  std::string id() const override { return "rule-parser"; }
};

// 2x2 patch grid; each patch is the one-hot of the palette color nearest
// its mean, plus a small shared bias channel. Any two distinct-color
// patches then have identical cosine, so frames with no palette color in
// common score exactly 1/N and a repeated frame with four distinct
// quadrants scores close to 1.
class MockFeatureExtractor : public FeatureExtractorBackend {
 public:
  FeatureMap extract(const Image& frame) override;
  std::string id() const override { return "mock-features"; }
};

// ---- Remote client contract ----

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& endpoint,
                            const std::map<std::string, std::string>& headers,
                            const std::string& body) = 0;
};

// POSTs over the wire via httplib. Credentials come from the environment
// variable named in the config at call time and are never stored.
class HttpTransport : public Transport {
 public:
  HttpResponse post(const std::string& endpoint,
                    const std::map<std::string, std::string>& headers,
                    const std::string& body) override;
};

// Simple requests-per-minute limiter shared by remote backends. Safe to
// call from concurrent pipeline workers.
class TokenBucket {
 public:
  explicit TokenBucket(int per_minute);
  void acquire();

 private:
  int per_minute_;
  double tokens_;
  std::uint64_t last_ns_;
  std::mutex mu_;
};

// Retries fn on TransientBackendError with exponential backoff; rethrows a
// BackendError carrying the attempt count when the budget is exhausted.
std::string with_retries(const RetryPolicy& policy,
                         const std::function<std::string()>& fn);

// JSON-over-HTTP contract shared by the remote backends: one endpoint, a
// "kind" discriminator in the request body, bearer credential from the
// environment variable named in the config. Responses carry {"text": ...}
// for generators and {"vectors": [[...]]} for the embedder.
class RemoteLlm : public LlmBackend {
 public:
  RemoteLlm(BackendConfig cfg, Transport& transport);
  std::string generate(const PromptBundle& prompt,
                       const SamplingParams& params) override;
  std::string id() const override { return "remote-llm:" + cfg_.model; }

 private:
  BackendConfig cfg_;
  Transport& transport_;
  std::unique_ptr<TokenBucket> bucket_;
};

// Frames travel as base64 PPM alongside the prompt.
class RemoteVideoLlm : public VideoLlmBackend {
 public:
  RemoteVideoLlm(BackendConfig cfg, Transport& transport);
  std::string generate(const std::vector<Image>& frames,
                       const PromptBundle& prompt) override;
  std::string id() const override { return "remote-videollm:" + cfg_.model; }

 private:
  BackendConfig cfg_;
  Transport& transport_;
  std::unique_ptr<TokenBucket> bucket_;
};

class RemoteEmbedding : public EmbeddingBackend {
 public:
  RemoteEmbedding(BackendConfig cfg, Transport& transport);
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts,
      const std::string& instruction) override;
  std::string id() const override {
    return "remote-embedding:" + cfg_.model;
  }

 private:
  BackendConfig cfg_;
  Transport& transport_;
  std::unique_ptr<TokenBucket> bucket_;
};

}  // namespace shotad
