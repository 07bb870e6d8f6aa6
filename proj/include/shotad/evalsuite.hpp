// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0
//
// Corpus metrics over frozen artifacts: CIDEr-D, Recall@k/N, character
// name IoU, the 1-5 LLM judge, and thread-clustering quality.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shotad/backends.hpp"
#include "shotad/corpus.hpp"

namespace shotad {

// CIDEr-D with a single reference per item. Document frequencies and the
// corpus length statistic come from the evaluation set's references, so
// per-item scores are comparable across candidates.
class CiderScorer {
 public:
  CiderScorer(const std::map<std::string, std::string>& refs, int max_n = 4,
              double sigma = 6.0);

  // Per-item value on the reference formulation's 0-10 scale.
  double score_item(const std::string& ad_id, const std::string& pred) const;

  // Mean per-item value, reported on the x100 scale. Key sets must match.
  double corpus(const std::map<std::string, std::string>& preds) const;

  int max_n() const { return max_n_; }
  double sigma() const { return sigma_; }

 private:
  struct Cooked {
    // Per n: ngram -> tf-idf weight, plus the vector norm.
    std::vector<std::map<std::string, double>> vec;
    std::vector<double> norm;
    long long bigram_count = 0;
  };
  Cooked cook(const std::string& text) const;

  int max_n_;
  double sigma_;
  double ref_len_;
  std::map<std::string, int> df_;
  std::map<std::string, Cooked> refs_;
};

struct RecallResult {
  double percent = 0.0;
  int hits = 0;
  int total = 0;
  int truncated = 0;  // predictions whose neighborhood had < N events
  std::map<std::string, int> rank;
};

// For every prediction: rank its own reference among the N temporally
// nearest references of the same clip (itself included) by cosine. A hit
// is a rank within the top k.
RecallResult recall_at_k(const std::map<std::string, std::string>& preds,
                         const Manifest& manifest, int k, int n_neighborhood,
                         EmbeddingBackend& embedder,
                         const std::string& instruction,
                         BackendStats* stats = nullptr);

// IoU of cast first names found in the prediction against the ground-truth
// name set. nullopt when neither side names anyone.
std::optional<double> critic_name_iou(const std::string& pred_text,
                                      const std::set<std::string>& gt_names,
                                      const std::vector<CastMember>& cast);

struct CriticResult {
  double mean_x100 = 0.0;  // over engaged ADs
  int engaged = 0;
  int skipped = 0;
  std::map<std::string, double> per_ad;
};

CriticResult critic_corpus(const std::map<std::string, std::string>& preds,
                           const Manifest& manifest);

struct LlmAdEvalResult {
  double mean = 0.0;  // 1-5 scale over scored ADs
  int scored = 0;
  int skipped = 0;
  std::map<std::string, int> per_ad;
};

// Judge each prediction against its reference; a second attempt covers
// malformed completions, after which the AD is skipped and counted.
LlmAdEvalResult llm_ad_eval(const std::map<std::string, std::string>& preds,
                            const std::map<std::string, std::string>& refs,
                            LlmBackend& llm, const SamplingParams& params,
                            BackendStats* stats = nullptr);

struct ThreadMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double ap = 0.0;
  double wcp = 0.0;
  int positives = 0;
  int predicted_positives = 0;
};

// Pairwise scores against binary same-cluster labels, plus clustering
// purity. Scores must cover every unordered shot pair.
ThreadMetrics thread_metrics(
    const std::map<std::pair<int, int>, double>& scores,
    const std::vector<std::vector<int>>& pred_threads,
    const std::vector<std::vector<int>>& gt_threads, int shot_count,
    double epsilon);

}  // namespace shotad
