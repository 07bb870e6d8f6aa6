// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/actionscore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shotad/errors.hpp"
#include "shotad/prompts.hpp"
#include "shotad/util.hpp"

namespace shotad {

void validate(const ActionScoreConfig& cfg) {
  if (cfg.sim_weight < 0.0 || cfg.verb_weight < 0.0)
    throw ConfigError("action score: weights must be non-negative");
  if (std::fabs(cfg.sim_weight + cfg.verb_weight - 1.0) > 1e-9)
    throw ConfigError("action score: weights must sum to 1");
  if (cfg.rescale_gain <= 0.0)
    throw ConfigError("action score: rescale_gain must be positive");
  if (cfg.embed_instruction.empty())
    throw ConfigError("action score: embed_instruction must be set");
}

PredictionSet parse_prediction(const std::string& prediction,
                               ParserBackend& parser, BackendStats* stats) {
  PredictionSet set;
  for (const auto& sentence : split_sentences(prediction)) {
    set.sentences.push_back(sentence);
    for (auto& phrase : parse_actions(parser, sentence, stats))
      set.phrases.push_back(std::move(phrase));
  }
  return set;
}

std::vector<std::string> preprocess_gt_actions(const std::string& gt_text,
                                               LlmBackend& llm,
                                               const SamplingParams& params,
                                               BackendStats* stats) {
  auto removal = llm_generate_json(llm, build_char_removal(gt_text), params,
                                   stats);
  if (!removal["Output"].is_string())
    throw BackendError("character removal returned a non-string Output");
  const std::string neutral = removal["Output"].get<std::string>();
  if (trim(neutral).empty())
    throw BackendError("character removal returned an empty sentence");

  auto split = llm_generate_json(llm, build_action_split(neutral), params,
                                 stats);
  if (!split["Subsentences"].is_array())
    throw BackendError("action split returned a non-array Subsentences");
  std::vector<std::string> actions;
  for (const auto& item : split["Subsentences"]) {
    if (!item.is_string())
      throw BackendError("action split returned a non-string subsentence");
    std::string s = trim(item.get<std::string>());
    if (!s.empty()) actions.push_back(std::move(s));
  }
  return actions;
}

std::vector<ActionMatch> score_actions(
    const std::vector<std::string>& gt_actions, const PredictionSet& pred,
    EmbeddingBackend& embedder, const ActionScoreConfig& cfg,
    BackendStats* stats) {
  validate(cfg);
  if (gt_actions.empty()) return {};

  std::vector<std::string> texts = gt_actions;
  for (const auto& s : pred.sentences) texts.push_back(s);
  for (const auto& p : pred.phrases) texts.push_back(p.phrase);
  const auto vecs = embed_text(embedder, texts, cfg.embed_instruction, stats);

  const std::size_t g = gt_actions.size();
  const std::size_t ns = pred.sentences.size();
  const std::size_t np = pred.phrases.size();

  std::vector<ActionMatch> out;
  out.reserve(g);
  for (std::size_t i = 0; i < g; ++i) {
    ActionMatch m;
    std::string gt_lemma;
    auto gt_phrases = extract_action_phrases(gt_actions[i]);
    if (!gt_phrases.empty()) gt_lemma = gt_phrases.front().lemma;

    for (std::size_t j = 0; j < ns + np; ++j)
      m.s_sim = std::max(m.s_sim, cosine(vecs[i], vecs[g + j]));
    for (std::size_t j = 0; j < np; ++j) {
      if (gt_lemma.empty() || pred.phrases[j].lemma != gt_lemma) continue;
      m.s_verb = std::max(m.s_verb, cosine(vecs[i], vecs[g + ns + j]));
    }
    m.raw = cfg.sim_weight * m.s_sim + cfg.verb_weight * m.s_verb;
    m.rescaled = std::clamp((m.raw - cfg.rescale_offset) * cfg.rescale_gain,
                            0.0, 1.0);
    out.push_back(m);
  }
  return out;
}

double ad_action_score(const std::vector<ActionMatch>& matches) {
  if (matches.empty())
    throw Error("ad_action_score: no ground-truth actions to average");
  double sum = 0.0;
  for (const auto& m : matches) sum += m.rescaled;
  return sum / static_cast<double>(matches.size());
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error("pearson: input lengths differ");
  const std::size_t n = a.size();
  if (n < 2) throw Error("pearson: need at least two samples");
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw Error("pearson: an input has zero variance");
  return sab / std::sqrt(saa * sbb);
}

namespace {

// Average ranks, 1-based; ties share the mean of their rank span.
std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) /
                            2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error("spearman: input lengths differ");
  if (a.size() < 2) throw Error("spearman: need at least two samples");
  return pearson(average_ranks(a), average_ranks(b));
}

}  // namespace shotad
