// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0
//
// Action score: does a predicted description carry the actions of the
// ground truth? Ground truth is normalized to single-action subsentences,
// predictions are matched by embedding similarity plus a verb-lemma bonus.

#pragma once

#include <string>
#include <vector>

#include "shotad/backends.hpp"
#include "shotad/textproc.hpp"

namespace shotad {

struct ActionScoreConfig {
  double sim_weight = 0.8;
  double verb_weight = 0.2;
  // Raw scores rarely leave [0.25, 0.75]; shift and stretch onto [0, 1].
  double rescale_offset = 0.25;
  double rescale_gain = 2.0;
  std::string embed_instruction =
      "Retrieve relevant passages that involve similar actions, with "
      "particular focus on the verbs.";
};

void validate(const ActionScoreConfig& cfg);

// A prediction decomposed for matching: its sentences plus every action
// phrase extracted from them.
struct PredictionSet {
  std::vector<std::string> sentences;
  std::vector<ActionPhrase> phrases;
};

PredictionSet parse_prediction(const std::string& prediction,
                               ParserBackend& parser,
                               BackendStats* stats = nullptr);

// Character removal followed by action split, both via the LLM. Returns
// the single-action subsentences; empties are dropped.
std::vector<std::string> preprocess_gt_actions(const std::string& gt_text,
                                               LlmBackend& llm,
                                               const SamplingParams& params,
                                               BackendStats* stats = nullptr);

struct ActionMatch {
  double s_sim = 0.0;   // best cosine over sentences and phrases
  double s_verb = 0.0;  // best lemma-gated cosine over phrases
  double raw = 0.0;
  double rescaled = 0.0;
};

// Scores every ground-truth action against one prediction. One embedding
// call covers all texts involved.
std::vector<ActionMatch> score_actions(
    const std::vector<std::string>& gt_actions, const PredictionSet& pred,
    EmbeddingBackend& embedder, const ActionScoreConfig& cfg,
    BackendStats* stats = nullptr);

// Mean rescaled score of one AD; errors on empty input.
double ad_action_score(const std::vector<ActionMatch>& matches);

double pearson(const std::vector<double>& a, const std::vector<double>& b);
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace shotad
