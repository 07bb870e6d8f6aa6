// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "shotad/backends.hpp"
#include "shotad/errors.hpp"
#include "shotad/prompts.hpp"
#include "shotad/util.hpp"

using namespace shotad;
using nlohmann::ordered_json;

namespace {

PromptBundle json_prompt(std::vector<std::string> keys) {
  PromptBundle p;
  p.user_text = "answer";
  p.expects_json = true;
  p.answer_keys = std::move(keys);
  return p;
}

class EmptyVideoLlm : public VideoLlmBackend {
 public:
  std::string generate(const std::vector<Image>&,
                       const PromptBundle&) override {
    return "   ";
  }
  std::string id() const override { return "empty-videollm"; }
};

class BadEmbedding : public EmbeddingBackend {
 public:
  enum Mode { kWrongCount, kRagged, kNotUnit } mode;
  explicit BadEmbedding(Mode m) : mode(m) {}
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts, const std::string&) override {
    switch (mode) {
      case kWrongCount:
        return {};
      case kRagged:
        return {{1.0}, {0.6, 0.8}};
      case kNotUnit: {
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < texts.size(); ++i) out.push_back({2.0});
        return out;
      }
    }
    return {};
  }
  std::string id() const override { return "bad-embedding"; }
};

// Scripted HTTP endpoint; records every request verbatim.
class RecordingTransport : public Transport {
 public:
  struct Request {
    std::string endpoint;
    std::map<std::string, std::string> headers;
    std::string body;
  };
  std::vector<Request> requests;
  std::vector<HttpResponse> responses;

  HttpResponse post(const std::string& endpoint,
                    const std::map<std::string, std::string>& headers,
                    const std::string& body) override {
    requests.push_back({endpoint, headers, body});
    if (requests.size() > responses.size())
      throw Error("transport script exhausted");
    return responses[requests.size() - 1];
  }
};

BackendConfig remote_config() {
  BackendConfig cfg;
  cfg.kind = "llm";
  cfg.endpoint = "http://unit.test/v1/generate";
  cfg.credential_env = "SHOTAD_TEST_CRED";
  cfg.model = "m1";
  cfg.retry.max_attempts = 3;
  cfg.retry.backoff_seconds = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("mock llm answers the toolkit prompt contracts") {
  MockLlm llm;
  const SamplingParams greedy;
  BackendStats stats;

  SUBCASE("character removal echoes the input") {
    const auto j = llm_generate_json(
        llm, build_char_removal("Alice waves at Bob."), greedy, &stats);
    CHECK(j.at("Output") == "Alice waves at Bob.");
    CHECK(stats.llm_calls == 1);
  }

  SUBCASE("action split produces one subsentence per clause") {
    const auto j = llm_generate_json(
        llm, build_action_split("She stands up, then walks out."), greedy);
    REQUIRE(j.at("Subsentences").is_array());
    CHECK(j.at("Subsentences").size() == 2);
  }

  SUBCASE("single summary is deterministic and style-free when greedy") {
    const auto prompt = build_stage2(
        "A man opens the door. He looks around the empty hall.", 5.5,
        profile_by_name("CMD-AD"), false, 3);
    const auto a = llm_generate_json(llm, prompt, greedy);
    const auto b = llm_generate_json(llm, prompt, greedy);
    CHECK(a == b);
    const std::string text = a.at("summarized_AD").get<std::string>();
    CHECK(text == "A man opens the door.");
  }

  SUBCASE("sampling varies the phrasing by seed") {
    const auto prompt = build_stage2(
        "A man opens the door. He looks around the empty hall.", 5.5,
        profile_by_name("CMD-AD"), false, 3);
    SamplingParams s1{0.9, 0.6, 1};
    SamplingParams s2{0.9, 0.6, 2};
    const auto a = llm_generate_json(llm, prompt, s1);
    const auto b = llm_generate_json(llm, prompt, s2);
    CHECK(a.at("summarized_AD") != b.at("summarized_AD"));
  }

  SUBCASE("joint summary fills five distinct keys within the word limit") {
    const auto prompt = build_stage2(
        "A man opens the door. He looks around the empty hall.", 5.5,
        profile_by_name("CMD-AD"), true, 3);
    const auto j = llm_generate_json(llm, prompt, greedy);
    for (int i = 1; i <= 5; ++i) {
      const auto key = "summarized_AD_" + std::to_string(i);
      REQUIRE(j.contains(key));
      const std::string text = j.at(key).get<std::string>();
      CHECK_FALSE(text.empty());
      int words = 1;
      for (char c : text) words += c == ' ' ? 1 : 0;
      CHECK(words <= 21);
    }
    CHECK(j.at("summarized_AD_1") != j.at("summarized_AD_2"));
  }

  SUBCASE("judge scores identity five and disjoint one") {
    const auto same = llm_generate_json(
        llm, build_ad_eval_judge("She opens the door.", "She opens the door."),
        greedy);
    CHECK(same.at("score") == 5);
    const auto far = llm_generate_json(
        llm, build_ad_eval_judge("She opens the door.", "Zebra quantum flux."),
        greedy);
    CHECK(far.at("score") == 1);
  }

  SUBCASE("action metric scores identity three and disjoint zero") {
    const auto same = llm_generate_json(
        llm,
        build_llm_action_metric("She opens the door.", "She opens the door."),
        greedy);
    CHECK(same.at("score") == 3);
    const auto far = llm_generate_json(
        llm,
        build_llm_action_metric("She opens the door.", "Zebra quantum flux."),
        greedy);
    CHECK(far.at("score") == 0);
  }
}

TEST_CASE("parse_json_answer") {
  SUBCASE("plain object with surrounding prose") {
    const auto j = parse_json_answer("Sure! {\"a\": 1, \"b\": \"x\"} done",
                                     {"a", "b"});
    CHECK(j.at("a") == 1);
    CHECK(j.at("b") == "x");
  }
  SUBCASE("single-quoted object") {
    const auto j = parse_json_answer(
        "{'score': 2, 'explanation': 'The action \"runs\" matches.'}",
        {"score", "explanation"});
    CHECK(j.at("score") == 2);
    CHECK(j.at("explanation") == "The action \"runs\" matches.");
  }
  SUBCASE("apostrophe inside a single-quoted value survives") {
    const auto j = parse_json_answer("{'Output': 'it's a trap'}", {"Output"});
    CHECK(j.at("Output") == "it's a trap");
  }
  SUBCASE("skips earlier objects without the keys") {
    const auto j = parse_json_answer("{\"x\": 1} and {\"score\": 3}",
                                     {"score"});
    CHECK(j.at("score") == 3);
  }
  SUBCASE("nested object") {
    const auto j = parse_json_answer("{\"score\": 1, \"extra\": {\"d\": 2}}",
                                     {"score"});
    CHECK(j.at("extra").at("d") == 2);
  }
  SUBCASE("missing keys throw") {
    CHECK_THROWS_AS(parse_json_answer("{\"a\": 1}", {"b"}), ValidationError);
    CHECK_THROWS_AS(parse_json_answer("no json here", {"b"}),
                    ValidationError);
  }
}

TEST_CASE("llm_generate_json retries once on malformed output") {
  SUBCASE("second attempt recovers") {
    ScriptedLlm llm({"not json at all", "{\"k\": \"v\"}"});
    BackendStats stats;
    const auto j = llm_generate_json(llm, json_prompt({"k"}),
                                     SamplingParams{}, &stats);
    CHECK(j.at("k") == "v");
    CHECK(llm.consumed() == 2);
    CHECK(stats.llm_calls == 2);
  }
  SUBCASE("persistent garbage becomes a backend error") {
    ScriptedLlm llm({"nope", "still nope"});
    try {
      llm_generate_json(llm, json_prompt({"k"}), SamplingParams{});
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.attempts() == 2);
    }
  }
  SUBCASE("first success does not consume the retry") {
    ScriptedLlm llm({"{\"k\": 1}"});
    llm_generate_json(llm, json_prompt({"k"}), SamplingParams{});
    CHECK(llm.consumed() == 1);
  }
}

TEST_CASE("validated entry points enforce interface contracts") {
  SUBCASE("videollm needs frames and a nonempty completion") {
    MockVideoLlm mock;
    PromptBundle p;
    p.user_text = "describe";
    CHECK_THROWS_AS(videollm_generate(mock, {}, p), Error);
    std::vector<Image> frames{Image(8, 8), Image(8, 8)};
    BackendStats stats;
    const auto out = videollm_generate(mock, frames, p, &stats);
    CHECK(out.find("Frames observed: 2") != std::string::npos);
    CHECK(stats.videollm_calls == 1);
    EmptyVideoLlm empty;
    CHECK_THROWS_AS(videollm_generate(empty, frames, p), BackendError);
  }
  SUBCASE("llm rejects empty completions") {
    ScriptedLlm blank({"  \n "});
    PromptBundle p;
    p.user_text = "x";
    CHECK_THROWS_AS(llm_generate(blank, p, SamplingParams{}), BackendError);
    PromptBundle noprompt;
    MockLlm mock;
    CHECK_THROWS_AS(llm_generate(mock, noprompt, SamplingParams{}), Error);
  }
  SUBCASE("embedding contract") {
    HashedBagEmbedding good;
    BackendStats stats;
    CHECK(embed_text(good, {}, "", &stats).empty());
    CHECK(stats.embed_calls == 0);  // nothing to embed, no call
    const auto vecs = embed_text(good, {"a", "b"}, "inst", &stats);
    CHECK(vecs.size() == 2);
    CHECK(stats.embed_calls == 1);

    BadEmbedding wrong(BadEmbedding::kWrongCount);
    CHECK_THROWS_AS(embed_text(wrong, {"a"}, ""), BackendError);
    BadEmbedding ragged(BadEmbedding::kRagged);
    CHECK_THROWS_AS(embed_text(ragged, {"a", "b"}, ""), BackendError);
    BadEmbedding unit(BadEmbedding::kNotUnit);
    CHECK_THROWS_AS(embed_text(unit, {"a"}, ""), BackendError);
  }
  SUBCASE("parser counts calls") {
    RuleParser parser;
    BackendStats stats;
    const auto phrases =
        parse_actions(parser, "She walks to the door.", &stats);
    REQUIRE(phrases.size() == 1);
    CHECK(phrases[0].lemma == "walk");
    CHECK(stats.parse_calls == 1);
  }
}

TEST_CASE("hashed bag embedding geometry") {
  HashedBagEmbedding emb;
  const auto vecs = emb.embed({"the dog runs fast",
                               "the dog runs fast",
                               "purple monolith hums quietly",
                               "he walks", "she walked", ""},
                              "");
  REQUIRE(vecs.size() == 6);
  for (const auto& v : vecs) {
    double n2 = 0;
    for (double x : v) n2 += x * x;
    CHECK(std::sqrt(n2) == doctest::Approx(1.0));
  }
  CHECK(cosine(vecs[0], vecs[1]) == doctest::Approx(1.0));
  CHECK(cosine(vecs[0], vecs[2]) == doctest::Approx(0.0).epsilon(0.1));
  // Lemma folding: "walks" and "walked" agree on the verb dimension.
  CHECK(cosine(vecs[3], vecs[4]) > 0.4);
}

TEST_CASE("cosine") {
  CHECK(cosine({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(cosine({1, 2}, {2, 4}) == doctest::Approx(1.0));
  CHECK(cosine({0, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cosine({1}, {1, 2}), Error);
}

TEST_CASE("with_retries") {
  RetryPolicy fast{3, 0.0};
  SUBCASE("transient faults are retried until success") {
    int calls = 0;
    const auto out = with_retries(fast, [&]() -> std::string {
      if (++calls < 3) throw TransientBackendError("busy");
      return "done";
    });
    CHECK(out == "done");
    CHECK(calls == 3);
  }
  SUBCASE("exhaustion reports the attempt count") {
    int calls = 0;
    try {
      with_retries(fast, [&]() -> std::string {
        ++calls;
        throw TransientBackendError("busy");
      });
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.attempts() == 3);
      CHECK(calls == 3);
    }
  }
  SUBCASE("fatal errors pass through immediately") {
    int calls = 0;
    CHECK_THROWS_AS(with_retries(fast,
                                 [&]() -> std::string {
                                   ++calls;
                                   throw BackendError("fatal");
                                 }),
                    BackendError);
    CHECK(calls == 1);
  }
}

TEST_CASE("token bucket") {
  TokenBucket unlimited(0);
  unlimited.acquire();  // returns immediately
  TokenBucket fast(60000);
  for (int i = 0; i < 3; ++i) fast.acquire();
}

TEST_CASE("backend config validation") {
  BackendConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  BackendConfig bad = cfg;
  bad.sampling.top_p = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.sampling.top_p = 1.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.sampling.temperature = -0.1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.retry.max_attempts = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.requests_per_minute = -1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("remote llm speaks the wire contract") {
  ::setenv("SHOTAD_TEST_CRED", "unit-test-credential-value", 1);
  RecordingTransport transport;
  PromptBundle prompt;
  prompt.system_text = "sys";
  prompt.user_text = "user";

  SUBCASE("request shape and bearer header") {
    transport.responses = {{200, "{\"text\": \"hello\"}"}};
    RemoteLlm llm(remote_config(), transport);
    CHECK(llm.id() == "remote-llm:m1");
    SamplingParams params{0.9, 0.6, 42};
    CHECK(llm.generate(prompt, params) == "hello");
    REQUIRE(transport.requests.size() == 1);
    const auto& req = transport.requests[0];
    CHECK(req.endpoint == "http://unit.test/v1/generate");
    CHECK(req.headers.at("Authorization") ==
          "Bearer unit-test-credential-value");
    const auto body = ordered_json::parse(req.body);
    CHECK(body.at("kind") == "llm");
    CHECK(body.at("model") == "m1");
    CHECK(body.at("system") == "sys");
    CHECK(body.at("user") == "user");
    CHECK(body.at("top_p") == doctest::Approx(0.9));
    CHECK(body.at("temperature") == doctest::Approx(0.6));
    CHECK(body.at("seed") == 42);
  }

  SUBCASE("429 retries, then succeeds") {
    transport.responses = {{429, "slow down"}, {200, "{\"text\": \"ok\"}"}};
    RemoteLlm llm(remote_config(), transport);
    CHECK(llm.generate(prompt, SamplingParams{}) == "ok");
    CHECK(transport.requests.size() == 2);
  }

  SUBCASE("server errors exhaust the retry budget") {
    transport.responses = {{500, ""}, {503, ""}, {500, ""}};
    RemoteLlm llm(remote_config(), transport);
    try {
      llm.generate(prompt, SamplingParams{});
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.attempts() == 3);
    }
    CHECK(transport.requests.size() == 3);
  }

  SUBCASE("client errors fail immediately") {
    transport.responses = {{404, "nope"}};
    RemoteLlm llm(remote_config(), transport);
    CHECK_THROWS_AS(llm.generate(prompt, SamplingParams{}), BackendError);
    CHECK(transport.requests.size() == 1);
  }

  SUBCASE("malformed response body") {
    transport.responses = {{200, "{\"no_text\": 1}"}};
    RemoteLlm llm(remote_config(), transport);
    CHECK_THROWS_AS(llm.generate(prompt, SamplingParams{}), BackendError);
  }

  SUBCASE("missing credential variable") {
    ::unsetenv("SHOTAD_TEST_CRED");
    transport.responses = {{200, "{\"text\": \"x\"}"}};
    RemoteLlm llm(remote_config(), transport);
    CHECK_THROWS_AS(llm.generate(prompt, SamplingParams{}), ConfigError);
    CHECK(transport.requests.empty());
    ::setenv("SHOTAD_TEST_CRED", "unit-test-credential-value", 1);
  }

  SUBCASE("config without endpoint is rejected at construction") {
    BackendConfig cfg = remote_config();
    cfg.endpoint.clear();
    CHECK_THROWS_AS(RemoteLlm(cfg, transport), ConfigError);
    cfg = remote_config();
    cfg.credential_env.clear();
    CHECK_THROWS_AS(RemoteLlm(cfg, transport), ConfigError);
  }
}

TEST_CASE("remote videollm ships frames as base64 ppm") {
  ::setenv("SHOTAD_TEST_CRED", "unit-test-credential-value", 1);
  RecordingTransport transport;
  transport.responses = {{200, "{\"text\": \"seen\"}"}};
  BackendConfig cfg = remote_config();
  cfg.kind = "videollm";
  RemoteVideoLlm vllm(cfg, transport);
  CHECK(vllm.id() == "remote-videollm:m1");
  PromptBundle prompt;
  prompt.user_text = "describe";
  std::vector<Image> frames{Image(4, 4, Rgb{10, 20, 30}), Image(4, 4)};
  CHECK(vllm.generate(frames, prompt) == "seen");
  const auto body = ordered_json::parse(transport.requests.at(0).body);
  CHECK(body.at("kind") == "videollm");
  REQUIRE(body.at("frames").is_array());
  REQUIRE(body.at("frames").size() == 2);
  const std::string b64 = body.at("frames")[0].get<std::string>();
  CHECK_FALSE(b64.empty());
  // base64_encode and ppm_bytes are verified against fixed vectors in their
  // own tests; the wire payload must be their composition.
  CHECK(b64 == base64_encode(ppm_bytes(frames[0])));
}

TEST_CASE("remote embedding round trip") {
  ::setenv("SHOTAD_TEST_CRED", "unit-test-credential-value", 1);
  RecordingTransport transport;
  transport.responses = {
      {200, "{\"vectors\": [[1.0, 0.0], [0.0, 1.0]]}"}};
  BackendConfig cfg = remote_config();
  cfg.kind = "text_embedding";
  RemoteEmbedding emb(cfg, transport);
  CHECK(emb.id() == "remote-embedding:m1");
  const auto vecs = emb.embed({"a", "b"}, "focus on verbs");
  REQUIRE(vecs.size() == 2);
  CHECK(vecs[0] == std::vector<double>{1.0, 0.0});
  const auto body = ordered_json::parse(transport.requests.at(0).body);
  CHECK(body.at("kind") == "embedding");
  CHECK(body.at("instruction") == "focus on verbs");
  CHECK(body.at("texts") == ordered_json::array({"a", "b"}));

  RecordingTransport bad;
  bad.responses = {{200, "{\"vectors\": \"zap\"}"}};
  RemoteEmbedding emb2(cfg, bad);
  CHECK_THROWS_AS(emb2.embed({"a"}, ""), BackendError);
}
