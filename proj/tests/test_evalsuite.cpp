// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "shotad/backends.hpp"
#include "shotad/errors.hpp"
#include "shotad/evalsuite.hpp"

using namespace shotad;

namespace {

std::map<std::string, std::string> toy_refs() {
  return {
      {"ad1", "a man walks into the room"},
      {"ad2", "she opens the old wooden door"},
      {"ad3", "the dog runs across the yard"},
      {"ad4", "he holds the letter and smiles"},
  };
}

std::map<std::string, std::string> toy_preds() {
  return {
      {"ad1", "a man walks into the room"},
      {"ad2", "she opens a door quickly"},
      {"ad3", "the cat sleeps on the floor"},
      {"ad4", "zebra quantum flux"},
  };
}

// Hands out a fixed unit vector per exact text.
class TableEmbedding : public EmbeddingBackend {
 public:
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts, const std::string&) override {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      auto it = table.find(t);
      if (it == table.end())
        throw std::runtime_error("TableEmbedding: unmapped text: " + t);
      out.push_back(it->second);
    }
    return out;
  }
  std::string id() const override { return "table-embedding"; }

  std::map<std::string, std::vector<double>> table;
};

const std::vector<double> kE0 = {1.0, 0.0, 0.0};
const std::vector<double> kE1 = {0.0, 1.0, 0.0};
const std::vector<double> kMix = {0.6, 0.8, 0.0};

ADEvent event(const std::string& ad_id, const std::string& clip_id,
              double start, double end, const std::string& gt) {
  ADEvent e;
  e.ad_id = ad_id;
  e.clip_id = clip_id;
  e.start = start;
  e.end = end;
  e.gt_text = gt;
  return e;
}

}  // namespace

TEST_CASE("cider matches the frozen toy corpus") {
  const CiderScorer scorer(toy_refs());
  const auto preds = toy_preds();

  CHECK(std::abs(scorer.score_item("ad1", preds.at("ad1")) - 10.0) <= 1e-6);
  CHECK(std::abs(scorer.score_item("ad2", preds.at("ad2")) -
                 2.030617213349) <= 1e-6);
  // ad3 shares only "the", which every reference carries, so its idf
  // weight is zero; ad4 shares nothing at all.
  CHECK(std::abs(scorer.score_item("ad3", preds.at("ad3"))) <= 1e-6);
  CHECK(std::abs(scorer.score_item("ad4", preds.at("ad4"))) <= 1e-6);

  CHECK(std::abs(scorer.corpus(preds) - 30.076543033373) <= 1e-6);
  CHECK(scorer.max_n() == 4);
  CHECK(scorer.sigma() == 6.0);
}

TEST_CASE("cider bounds and validation") {
  const CiderScorer scorer(toy_refs());

  SUBCASE("per-item scores stay on the 0-10 scale") {
    for (const auto& [ad_id, text] : toy_refs()) {
      const double self = scorer.score_item(ad_id, text);
      CHECK(self == doctest::Approx(10.0).epsilon(1e-9));
    }
    const double partial = scorer.score_item("ad1", "a man");
    CHECK(partial >= 0.0);
    CHECK(partial < 10.0);
  }
  SUBCASE("unknown ad_id") {
    CHECK_THROWS_AS(scorer.score_item("nope", "text"), Error);
  }
  SUBCASE("corpus key set must match") {
    auto preds = toy_preds();
    preds.erase("ad4");
    CHECK_THROWS_AS(scorer.corpus(preds), Error);
    preds["ad5"] = "x";
    CHECK_THROWS_AS(scorer.corpus(preds), Error);
  }
  SUBCASE("constructor rejects bad parameters") {
    CHECK_THROWS_AS(CiderScorer({{"a", "x"}}, 4, 6.0), Error);
    CHECK_THROWS_AS(CiderScorer(toy_refs(), 0, 6.0), ConfigError);
    CHECK_THROWS_AS(CiderScorer(toy_refs(), 4, 0.0), ConfigError);
  }
}

TEST_CASE("recall_at_k ranks each prediction against its neighborhood") {
  Manifest m;
  m.clips.push_back({"c1", "c1.mp4", 10.0, 100.0, "", {}});
  m.events.push_back(event("a1", "c1", 0.0, 2.0, "gt one"));
  m.events.push_back(event("a2", "c1", 10.0, 12.0, "gt two"));
  m.events.push_back(event("a3", "c1", 20.0, 22.0, "gt three"));
  m.events.push_back(event("a4", "c1", 30.0, 32.0, "gt four"));

  TableEmbedding emb;
  emb.table["gt one"] = kE1;
  emb.table["gt two"] = kMix;
  emb.table["gt three"] = kE1;
  emb.table["gt four"] = kE1;
  const std::string instr = "instr";

  SUBCASE("own reference closest: rank 1") {
    emb.table["p2"] = kE0;  // cos .6 with own gt, 0 with the others
    BackendStats stats;
    const auto r = recall_at_k({{"a2", "p2"}}, m, 1, 3, emb, instr, &stats);
    CHECK(r.total == 1);
    CHECK(r.hits == 1);
    CHECK(r.percent == 100.0);
    CHECK(r.truncated == 0);
    CHECK(r.rank.at("a2") == 1);
    CHECK(stats.embed_calls == 1);
  }

  SUBCASE("a closer neighbor pushes the rank down") {
    // Prediction aligned with gt one (cos 1) beats its own gt (cos .8).
    emb.table["p2"] = kE1;
    const auto r1 = recall_at_k({{"a2", "p2"}}, m, 1, 3, emb, instr);
    CHECK(r1.hits == 0);
    // Neighborhood is |start| distance around a2: {a2, a1, a3}; both a1
    // and a3 embed identically so the rank drops by two.
    CHECK(r1.rank.at("a2") == 3);
    const auto r3 = recall_at_k({{"a2", "p2"}}, m, 3, 3, emb, instr);
    CHECK(r3.hits == 1);
  }

  SUBCASE("equal cosine does not outrank the reference") {
    emb.table["p2"] = kE0;
    TableEmbedding tied = emb;
    tied.table["gt one"] = kMix;  // same vector as gt two
    const auto r = recall_at_k({{"a2", "p2"}}, m, 1, 3, tied, instr);
    CHECK(r.rank.at("a2") == 1);
  }

  SUBCASE("neighborhood wider than the clip counts as truncated") {
    emb.table["p2"] = kE0;
    const auto r = recall_at_k({{"a2", "p2"}}, m, 1, 5, emb, instr);
    CHECK(r.truncated == 1);
    CHECK(r.rank.at("a2") == 1);
  }

  SUBCASE("events without references stay out of the pool") {
    Manifest with_blank = m;
    with_blank.events.push_back(event("a5", "c1", 11.0, 13.0, ""));
    emb.table["p2"] = kE0;
    // A blank-gt event nearer than every neighbor must not shift ranks.
    const auto r = recall_at_k({{"a2", "p2"}}, with_blank, 1, 3, emb, instr);
    CHECK(r.rank.at("a2") == 1);
  }

  SUBCASE("validation") {
    emb.table["p2"] = kE0;
    CHECK_THROWS_AS(recall_at_k({{"a2", "p2"}}, m, 0, 3, emb, instr),
                    ConfigError);
    CHECK_THROWS_AS(recall_at_k({{"a2", "p2"}}, m, 4, 3, emb, instr),
                    ConfigError);
    CHECK_THROWS_AS(recall_at_k({{"zz", "p"}}, m, 1, 3, emb, instr), Error);
  }

  SUBCASE("empty prediction set") {
    const auto r = recall_at_k({}, m, 1, 3, emb, instr);
    CHECK(r.total == 0);
    CHECK(r.percent == 0.0);
  }
}

TEST_CASE("critic_name_iou") {
  const std::vector<CastMember> cast = {
      {"Alice Smith", 0}, {"Bob Jones", 1}, {"Carol", 2}};

  SUBCASE("intersection over union of first names") {
    const auto iou =
        critic_name_iou("Alice waves at Bob.", {"Alice"}, cast);
    REQUIRE(iou.has_value());
    CHECK(*iou == 0.5);
  }
  SUBCASE("exact match") {
    const auto iou = critic_name_iou("Bob smiles.", {"bob"}, cast);
    REQUIRE(iou.has_value());
    CHECK(*iou == 1.0);
  }
  SUBCASE("whole-word matching only") {
    const auto iou = critic_name_iou("Alicia turns away.", {"Alice"}, cast);
    REQUIRE(iou.has_value());
    CHECK(*iou == 0.0);
  }
  SUBCASE("nobody named on either side") {
    CHECK(!critic_name_iou("The sun sets.", {}, cast).has_value());
  }
  SUBCASE("gt names missing from the prediction still count in the union") {
    const auto iou = critic_name_iou("The sun sets.", {"Carol"}, cast);
    REQUIRE(iou.has_value());
    CHECK(*iou == 0.0);
  }
}

TEST_CASE("critic_corpus engages only ADs that name someone") {
  Manifest m;
  auto e1 = event("a1", "c1", 0.0, 2.0, "gt");
  e1.cast = {{"Alice Smith", 0}, {"Bob Jones", 1}};
  e1.gt_characters = {"Alice"};
  auto e2 = event("a2", "c1", 5.0, 7.0, "gt");
  e2.cast = e1.cast;
  m.events = {e1, e2};

  const auto r = critic_corpus(
      {{"a1", "Alice waves at Bob."}, {"a2", "The sun sets."}}, m);
  CHECK(r.engaged == 1);
  CHECK(r.skipped == 1);
  CHECK(r.mean_x100 == 50.0);
  REQUIRE(r.per_ad.count("a1") == 1);
  CHECK(r.per_ad.at("a1") == 0.5);
  CHECK(r.per_ad.count("a2") == 0);

  CHECK_THROWS_AS(critic_corpus({{"zz", "x"}}, m), Error);
}

TEST_CASE("llm_ad_eval judges with retry and skip") {
  const std::map<std::string, std::string> refs = {{"a1", "He leaves."}};
  const SamplingParams greedy;

  SUBCASE("clean score") {
    ScriptedLlm llm({R"({"score": 4})"});
    const auto r = llm_ad_eval({{"a1", "He walks out."}}, refs, llm, greedy);
    CHECK(r.scored == 1);
    CHECK(r.skipped == 0);
    CHECK(r.mean == 4.0);
    CHECK(r.per_ad.at("a1") == 4);
    CHECK(llm.consumed() == 1);
  }

  SUBCASE("format reminder rescues a malformed completion") {
    ScriptedLlm llm({"not json", R"({"score": 2})"});
    const auto r = llm_ad_eval({{"a1", "x"}}, refs, llm, greedy);
    CHECK(r.scored == 1);
    CHECK(r.per_ad.at("a1") == 2);
    CHECK(llm.consumed() == 2);
  }

  SUBCASE("second judging attempt after a failed first") {
    ScriptedLlm llm({"junk", "more junk", R"({"score": 5})"});
    const auto r = llm_ad_eval({{"a1", "x"}}, refs, llm, greedy);
    CHECK(r.scored == 1);
    CHECK(r.per_ad.at("a1") == 5);
    CHECK(llm.consumed() == 3);
  }

  SUBCASE("out-of-range scores exhaust both attempts") {
    ScriptedLlm llm({R"({"score": 7})", R"({"score": 0})"});
    const auto r = llm_ad_eval({{"a1", "x"}}, refs, llm, greedy);
    CHECK(r.scored == 0);
    CHECK(r.skipped == 1);
    CHECK(r.mean == 0.0);
    CHECK(llm.consumed() == 2);
  }

  SUBCASE("non-integer score is rejected") {
    ScriptedLlm llm({R"({"score": 3.5})", R"({"score": "3"})"});
    const auto r = llm_ad_eval({{"a1", "x"}}, refs, llm, greedy);
    CHECK(r.scored == 0);
    CHECK(r.skipped == 1);
  }

  SUBCASE("mean over several ADs") {
    const std::map<std::string, std::string> refs2 = {{"a1", "r1"},
                                                      {"a2", "r2"}};
    ScriptedLlm llm({R"({"score": 5})", R"({"score": 3})"});
    const auto r =
        llm_ad_eval({{"a1", "x"}, {"a2", "y"}}, refs2, llm, greedy);
    CHECK(r.scored == 2);
    CHECK(r.mean == 4.0);
  }

  SUBCASE("missing reference") {
    ScriptedLlm llm({});
    CHECK_THROWS_AS(llm_ad_eval({{"zz", "x"}}, refs, llm, greedy), Error);
  }
}

TEST_CASE("thread_metrics closed forms") {
  SUBCASE("perfect two-thread prediction") {
    std::map<std::pair<int, int>, double> scores;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) scores[{i, j}] = 0.1;
    scores[{0, 1}] = 0.9;
    scores[{2, 3}] = 0.9;
    const std::vector<std::vector<int>> threads = {{0, 1}, {2, 3}};

    const auto m = thread_metrics(scores, threads, threads, 4, 0.3);
    CHECK(m.positives == 2);
    CHECK(m.predicted_positives == 2);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(std::abs(m.ap - 1.0) <= 1e-12);
    CHECK(std::abs(m.wcp - 1.0) <= 1e-12);
  }

  SUBCASE("all-singleton ground truth uses the empty conventions") {
    std::map<std::pair<int, int>, double> scores = {{{0, 1}, 0.1},
                                                    {{0, 2}, 0.1},
                                                    {{1, 2}, 0.1}};
    const auto m = thread_metrics(scores, {}, {}, 3, 0.3);
    CHECK(m.positives == 0);
    CHECK(m.predicted_positives == 0);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.ap == 1.0);
    // Singleton purity is perfect by construction.
    CHECK(std::abs(m.wcp - 1.0) <= 1e-12);
  }

  SUBCASE("a high-scoring negative halves average precision") {
    const std::map<std::pair<int, int>, double> scores = {
        {{0, 1}, 0.5}, {{0, 2}, 0.9}, {{1, 2}, 0.1}};
    const auto m =
        thread_metrics(scores, {{0, 2}}, {{0, 1}}, 3, 0.3);
    CHECK(m.positives == 1);
    CHECK(m.predicted_positives == 2);
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 1.0);
    CHECK(std::abs(m.ap - 0.5) <= 1e-12);
    // Pred {0,2} overlaps each gt label once; singleton {1} is pure.
    CHECK(std::abs(m.wcp - 2.0 / 3.0) <= 1e-12);
  }

  SUBCASE("wcp rewards the dominant label per predicted cluster") {
    std::map<std::pair<int, int>, double> scores;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) scores[{i, j}] = 0.0;
    const auto m = thread_metrics(scores, {{0, 1, 2}, {3}},
                                  {{0, 1}, {2, 3}}, 4, 0.3);
    CHECK(std::abs(m.wcp - 0.75) <= 1e-12);
  }

  SUBCASE("validation") {
    std::map<std::pair<int, int>, double> scores = {{{0, 1}, 0.5}};
    CHECK_THROWS_AS(thread_metrics(scores, {}, {}, 1, 0.3), Error);
    CHECK_THROWS_AS(thread_metrics(scores, {}, {}, 3, 0.3), Error);
    CHECK_THROWS_AS(thread_metrics(scores, {{0, 5}}, {}, 2, 0.3), Error);
    CHECK_THROWS_AS(thread_metrics(scores, {{0, 0}}, {}, 2, 0.3), Error);
    CHECK_THROWS_AS(thread_metrics(scores, {}, {{1, 1}}, 2, 0.3), Error);
  }
}
