// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "shotad/context.hpp"
#include "shotad/corpus.hpp"
#include "shotad/errors.hpp"
#include "shotad/prompts.hpp"
#include "shotad/threads.hpp"
#include "shotad/util.hpp"

using namespace shotad;

#ifndef SHOTAD_GOLDEN_DIR
#error "SHOTAD_GOLDEN_DIR must point at tests/goldens"
#endif

namespace {

std::string golden(const std::string& name) {
  return read_text_file(std::filesystem::path(SHOTAD_GOLDEN_DIR) / name);
}

// Five 1 s shots; the AD interval covers shots 2 and 3.
ContextWindow golden_window() {
  std::vector<Shot> shots;
  for (int i = 0; i < 5; ++i) {
    Shot s;
    s.index = i;
    s.start_frame = i * 10;
    s.end_frame = i * 10 + 9;
    s.start_time = i;
    s.end_time = i + 1;
    shots.push_back(s);
  }
  return build_window(shots, 2.2, 3.8, "golden");
}

std::string golden_char_text() {
  std::vector<CastMember> cast;
  cast.push_back({"Alice", 0});
  cast.push_back({"Bob", 1});
  return make_char_text(cast);
}

// Thread [Shot 1, Shot 3] among the window's five local shots.
std::string golden_thread_fragment() {
  std::map<std::pair<int, int>, double> scores;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) scores[{i, j}] = 0.0;
  scores[{1, 3}] = 0.9;
  return thread_prompt_fragment(cluster_threads(scores, 0.3, 5));
}

constexpr const char* kStage1Text =
    "Alice hands Bob a folded letter while he stands by the desk, and they "
    "exchange a look.";

}  // namespace

TEST_CASE("stage 1 prompts are byte-identical to the goldens") {
  const auto window = golden_window();
  REQUIRE(window.current_labels == std::vector<int>{2, 3});
  const std::string char_text = golden_char_text();
  const std::string fragment = golden_thread_fragment();
  REQUIRE(fragment ==
          "Finally, in one sentence, briefly explain why "
          "[Shot 1, Shot 3] share the same camera setup.\n");

  for (const std::string factor :
       {"facial_expression", "key_object", "environment"}) {
    for (const bool with_thread : {true, false}) {
      CAPTURE(factor);
      CAPTURE(with_thread);
      const auto b =
          build_stage1(window, factor_by_name(factor),
                       with_thread ? fragment : "", VideoType::kMovie,
                       char_text);
      CHECK(b.system_text.empty());
      CHECK_FALSE(b.expects_json);
      const std::string want = golden(
          "stage1_" + factor + (with_thread ? "_thread" : "_nothread") +
          ".txt");
      CHECK(b.user_text == want);
    }
  }
}

TEST_CASE("stage 2 prompts are byte-identical to the goldens") {
  struct Case {
    const char* profile;
    const char* file_key;
    double duration;
  };
  for (const auto& c : {Case{"CMD-AD", "cmd_ad", 5.5},
                        Case{"TV-AD", "tv_ad", 5.5},
                        Case{"MAD-Eval", "mad_eval", 2.55}}) {
    const auto profile = profile_by_name(c.profile);
    for (const bool assistant : {false, true}) {
      CAPTURE(c.profile);
      CAPTURE(assistant);
      const auto b = build_stage2(kStage1Text, c.duration, profile, assistant,
                                  /*seed=*/7);
      const std::string whole = golden(
          std::string("stage2_") + c.file_key +
          (assistant ? "_assistant" : "_single") + ".txt");
      const std::string sep = "\n<<<USER>>>\n";
      const auto pos = whole.find(sep);
      REQUIRE(pos != std::string::npos);
      CHECK(b.system_text == whole.substr(0, pos));
      CHECK(b.user_text == whole.substr(pos + sep.size()));
      CHECK(b.expects_json);
      if (assistant) {
        REQUIRE(b.answer_keys.size() == 5);
        CHECK(b.answer_keys.front() == "summarized_AD_1");
        CHECK(b.answer_keys.back() == "summarized_AD_5");
      } else {
        CHECK(b.answer_keys == std::vector<std::string>{"summarized_AD"});
      }
    }
  }
}

TEST_CASE("stage 2 word limits for the dataset profiles") {
  CHECK(stage2_word_limit(5.5, 0.275) == 21);
  CHECK(stage2_word_limit(5.5, 0.2695) == 21);
  CHECK(stage2_word_limit(2.55, 0.5102) == 5);
  CHECK(stage2_word_limit(1.0, 0.275) == 4);
  CHECK_THROWS_AS(stage2_word_limit(0.0, 0.275), Error);
  CHECK_THROWS_AS(stage2_word_limit(5.5, 0.0), Error);
  CHECK_THROWS_AS(stage2_word_limit(-1.0, 0.275), Error);
}

TEST_CASE("prompt helper renderers") {
  CHECK(render_key_shots({2, 3}) == "[Shot 2, Shot 3]");
  CHECK(render_key_shots({0}) == "[Shot 0]");
  CHECK(render_verb_list({"look", "turn"}) == "['look', 'turn']");
  CHECK(render_verb_list({}) == "[]");
  CHECK(golden_char_text() ==
        ". Possible characters: Alice (red), Bob (green)");
  CHECK(make_char_text({}).empty());
}

TEST_CASE("stage 1 without a factor uses three steps") {
  const auto window = golden_window();
  const auto b = build_stage1(window, Factor::kNone, "", VideoType::kMovie,
                              golden_char_text());
  CHECK(b.user_text.find("in the three steps below") != std::string::npos);
  CHECK(b.user_text.find("4. Describe") == std::string::npos);
  CHECK(b.user_text.find("3. Character-character interactions: ''.") !=
        std::string::npos);

  ContextWindow empty;
  CHECK_THROWS_AS(
      build_stage1(empty, Factor::kNone, "", VideoType::kMovie, ""), Error);
}

TEST_CASE("stage 1 for tv series names the clip type") {
  const auto b = build_stage1(golden_window(), Factor::kKeyObject, "",
                              VideoType::kTvSeries, "");
  CHECK(b.user_text.find("Please watch the following TV series clip") == 0);
}

TEST_CASE("stage 2 input validation") {
  const auto profile = profile_by_name("CMD-AD");
  CHECK_THROWS_AS(build_stage2("", 5.5, profile, false, 0), Error);
  DatasetProfile broken = profile;
  broken.example_sentences.clear();
  CHECK_THROWS_AS(build_stage2("x", 5.5, broken, false, 0), ConfigError);
}

TEST_CASE("auxiliary prompts carry their contracts") {
  SUBCASE("character removal") {
    const auto b = build_char_removal("Alice waves at Bob.");
    CHECK(b.expects_json);
    CHECK(b.answer_keys == std::vector<std::string>{"Output"});
    CHECK(b.user_text.find("Input sentence: \"Alice waves at Bob.\"") !=
          std::string::npos);
    // The first worked example keeps its published spelling.
    CHECK(b.user_text.find("- Ouput: \"He watches him pass out the "
                           "schedule.\"") != std::string::npos);
    CHECK_THROWS_AS(build_char_removal(""), Error);
  }
  SUBCASE("action split") {
    const auto b = build_action_split("He waves and leaves.");
    CHECK(b.answer_keys == std::vector<std::string>{"Subsentences"});
    CHECK(b.user_text.find("Input sentence: \"He waves and leaves.\"") !=
          std::string::npos);
    CHECK_THROWS_AS(build_action_split(""), Error);
  }
  SUBCASE("llm action metric") {
    const auto b = build_llm_action_metric("She opens the door.",
                                           "She pushes the door open.");
    REQUIRE(b.answer_keys.size() == 2);
    CHECK(b.answer_keys[0] == "score");
    CHECK(b.user_text.find("# Reference (Ref): 'She opens the door.'") !=
          std::string::npos);
    CHECK(b.user_text.find("# Description (Des): 'She pushes the door "
                           "open.'") != std::string::npos);
    CHECK_THROWS_AS(build_llm_action_metric("", "x"), Error);
    CHECK_THROWS_AS(build_llm_action_metric("x", ""), Error);
  }
  SUBCASE("ad eval judge") {
    const auto b = build_ad_eval_judge("ref text", "cand text");
    CHECK(b.answer_keys == std::vector<std::string>{"score"});
    CHECK(b.user_text.find("Ground truth: \"ref text\"") !=
          std::string::npos);
    CHECK(b.user_text.find("Candidate: \"cand text\"") != std::string::npos);
    CHECK_THROWS_AS(build_ad_eval_judge("", "x"), Error);
  }
}

TEST_CASE("prompt hash separates bundles") {
  PromptBundle a;
  a.system_text = "sys";
  a.user_text = "user";
  PromptBundle b = a;
  CHECK(a.hash() == b.hash());
  b.user_text = "user2";
  CHECK(a.hash() != b.hash());
  PromptBundle c;
  c.system_text = "sysuser";
  c.user_text = "";
  PromptBundle d;
  d.system_text = "sys";
  d.user_text = "user";
  CHECK(c.hash() != d.hash());  // boundary between parts matters
}
