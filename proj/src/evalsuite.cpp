// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/evalsuite.hpp"

#include <algorithm>
#include <cmath>

#include "shotad/errors.hpp"
#include "shotad/prompts.hpp"
#include "shotad/textproc.hpp"
#include "shotad/util.hpp"

namespace shotad {

namespace {

std::vector<std::string> ngrams_of(const std::vector<std::string>& tokens,
                                   int n) {
  std::vector<std::string> out;
  if (static_cast<int>(tokens.size()) < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) key += '\x1f' + tokens[i + j];
    out.push_back(std::move(key));
  }
  return out;
}

}  // namespace

CiderScorer::CiderScorer(const std::map<std::string, std::string>& refs,
                         int max_n, double sigma)
    : max_n_(max_n), sigma_(sigma) {
  if (max_n_ < 1) throw ConfigError("cider: max_n must be >= 1");
  if (!(sigma_ > 0.0)) throw ConfigError("cider: sigma must be positive");
  if (refs.size() < 2)
    throw Error("cider: corpus must have at least two references");

  // Document frequency counts each reference once per distinct ngram.
  for (const auto& [ad_id, text] : refs) {
    const auto tokens = tokenize_words(text);
    std::set<std::string> seen;
    for (int n = 1; n <= max_n_; ++n)
      for (auto& g : ngrams_of(tokens, n)) seen.insert(std::move(g));
    for (const auto& g : seen) df_[g] += 1;
  }
  ref_len_ = std::log(static_cast<double>(refs.size()));
  for (const auto& [ad_id, text] : refs) refs_[ad_id] = cook(text);
}

CiderScorer::Cooked CiderScorer::cook(const std::string& text) const {
  Cooked c;
  c.vec.resize(static_cast<std::size_t>(max_n_));
  c.norm.assign(static_cast<std::size_t>(max_n_), 0.0);
  const auto tokens = tokenize_words(text);
  for (int n = 1; n <= max_n_; ++n) {
    std::map<std::string, int> tf;
    for (auto& g : ngrams_of(tokens, n)) tf[std::move(g)] += 1;
    auto& slot = c.vec[static_cast<std::size_t>(n - 1)];
    double norm2 = 0.0;
    for (const auto& [g, count] : tf) {
      auto it = df_.find(g);
      const double df = it == df_.end() ? 0.0 : it->second;
      const double w = count * (ref_len_ - std::log(std::max(1.0, df)));
      slot[g] = w;
      norm2 += w * w;
      // The reference formulation counts length in bigrams.
      if (n == 2) c.bigram_count += count;
    }
    c.norm[static_cast<std::size_t>(n - 1)] = std::sqrt(norm2);
  }
  return c;
}

double CiderScorer::score_item(const std::string& ad_id,
                               const std::string& pred) const {
  auto it = refs_.find(ad_id);
  if (it == refs_.end())
    throw Error("cider: unknown ad_id " + ad_id);
  const Cooked& ref = it->second;
  const Cooked hyp = cook(pred);

  const double delta =
      static_cast<double>(hyp.bigram_count - ref.bigram_count);
  const double penalty =
      std::exp(-(delta * delta) / (2.0 * sigma_ * sigma_));

  double total = 0.0;
  for (int n = 0; n < max_n_; ++n) {
    double val = 0.0;
    const auto& rv = ref.vec[static_cast<std::size_t>(n)];
    for (const auto& [g, hw] : hyp.vec[static_cast<std::size_t>(n)]) {
      auto rit = rv.find(g);
      if (rit == rv.end()) continue;
      val += std::min(hw, rit->second) * rit->second;
    }
    const double nh = hyp.norm[static_cast<std::size_t>(n)];
    const double nr = ref.norm[static_cast<std::size_t>(n)];
    if (nh != 0.0 && nr != 0.0) val /= nh * nr;
    total += val * penalty;
  }
  return total / max_n_ * 10.0;
}

double CiderScorer::corpus(
    const std::map<std::string, std::string>& preds) const {
  if (preds.size() != refs_.size())
    throw Error("cider: prediction and reference key sets differ");
  double sum = 0.0;
  for (const auto& [ad_id, text] : preds) {
    if (refs_.find(ad_id) == refs_.end())
      throw Error("cider: prediction for unknown ad_id " + ad_id);
    sum += score_item(ad_id, text);
  }
  return sum / static_cast<double>(preds.size()) * 10.0;
}

RecallResult recall_at_k(const std::map<std::string, std::string>& preds,
                         const Manifest& manifest, int k, int n_neighborhood,
                         EmbeddingBackend& embedder,
                         const std::string& instruction,
                         BackendStats* stats) {
  if (k < 1 || n_neighborhood < k)
    throw ConfigError("recall_at_k: need N >= k >= 1");

  // Candidate pool per clip: every event with a reference text.
  std::map<std::string, std::vector<const ADEvent*>> by_clip;
  std::map<std::string, const ADEvent*> by_id;
  for (const auto& e : manifest.events) {
    if (e.gt_text.empty()) continue;
    by_clip[e.clip_id].push_back(&e);
    by_id[e.ad_id] = &e;
  }

  RecallResult result;
  for (const auto& [ad_id, pred] : preds) {
    auto self_it = by_id.find(ad_id);
    if (self_it == by_id.end())
      throw Error("recall_at_k: no reference for ad_id " + ad_id);
    const ADEvent* self = self_it->second;

    auto pool = by_clip[self->clip_id];
    std::stable_sort(pool.begin(), pool.end(),
                     [&](const ADEvent* a, const ADEvent* b) {
                       const double da = std::fabs(a->start - self->start);
                       const double db = std::fabs(b->start - self->start);
                       if (da != db) return da < db;
                       if (a->start != b->start) return a->start < b->start;
                       return a->ad_id < b->ad_id;
                     });
    if (static_cast<int>(pool.size()) > n_neighborhood)
      pool.resize(static_cast<std::size_t>(n_neighborhood));
    else if (static_cast<int>(pool.size()) < n_neighborhood)
      ++result.truncated;

    std::size_t self_pos = pool.size();
    std::vector<std::string> texts = {pred};
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i]->ad_id == ad_id) self_pos = i;
      texts.push_back(pool[i]->gt_text);
    }
    if (self_pos == pool.size())
      throw Error("recall_at_k: event " + ad_id +
                  " fell outside its own neighborhood");

    const auto vecs = embed_text(embedder, texts, instruction, stats);
    const double own = cosine(vecs[0], vecs[1 + self_pos]);
    int rank = 1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i == self_pos) continue;
      if (cosine(vecs[0], vecs[1 + i]) > own) ++rank;
    }
    result.rank[ad_id] = rank;
    ++result.total;
    if (rank <= k) ++result.hits;
  }
  if (result.total > 0)
    result.percent = 100.0 * result.hits / result.total;
  return result;
}

std::optional<double> critic_name_iou(const std::string& pred_text,
                                      const std::set<std::string>& gt_names,
                                      const std::vector<CastMember>& cast) {
  const std::string haystack = lowercase(pred_text);
  std::set<std::string> predicted;
  for (const auto& member : cast) {
    auto parts = split_whitespace(member.name);
    if (parts.empty()) continue;
    const std::string first = lowercase(parts.front());
    if (contains_word(haystack, first)) predicted.insert(first);
  }
  std::set<std::string> gt;
  for (const auto& name : gt_names) gt.insert(lowercase(name));

  std::size_t inter = 0;
  for (const auto& name : predicted) inter += gt.count(name);
  const std::size_t uni = predicted.size() + gt.size() - inter;
  if (uni == 0) return std::nullopt;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

CriticResult critic_corpus(const std::map<std::string, std::string>& preds,
                           const Manifest& manifest) {
  std::map<std::string, const ADEvent*> by_id;
  for (const auto& e : manifest.events) by_id[e.ad_id] = &e;

  CriticResult result;
  double sum = 0.0;
  for (const auto& [ad_id, pred] : preds) {
    auto it = by_id.find(ad_id);
    if (it == by_id.end())
      throw Error("critic: unknown ad_id " + ad_id);
    const ADEvent& event = *it->second;
    std::set<std::string> gt(event.gt_characters.begin(),
                             event.gt_characters.end());
    auto iou = critic_name_iou(pred, gt, event.cast);
    if (!iou.has_value()) {
      ++result.skipped;
      continue;
    }
    result.per_ad[ad_id] = *iou;
    sum += *iou;
    ++result.engaged;
  }
  if (result.engaged > 0)
    result.mean_x100 = 100.0 * sum / result.engaged;
  return result;
}

LlmAdEvalResult llm_ad_eval(const std::map<std::string, std::string>& preds,
                            const std::map<std::string, std::string>& refs,
                            LlmBackend& llm, const SamplingParams& params,
                            BackendStats* stats) {
  LlmAdEvalResult result;
  double sum = 0.0;
  for (const auto& [ad_id, pred] : preds) {
    auto ref_it = refs.find(ad_id);
    if (ref_it == refs.end())
      throw Error("llm_ad_eval: no reference for ad_id " + ad_id);

    std::optional<int> score;
    for (int attempt = 0; attempt < 2 && !score.has_value(); ++attempt) {
      try {
        auto obj = llm_generate_json(
            llm, build_ad_eval_judge(ref_it->second, pred), params, stats);
        if (obj["score"].is_number_integer()) {
          const int v = obj["score"].get<int>();
          if (v >= 1 && v <= 5) score = v;
        }
      } catch (const BackendError&) {
      } catch (const ValidationError&) {
      }
    }
    if (!score.has_value()) {
      ++result.skipped;
      continue;
    }
    result.per_ad[ad_id] = *score;
    sum += *score;
    ++result.scored;
  }
  if (result.scored > 0) result.mean = sum / result.scored;
  return result;
}

ThreadMetrics thread_metrics(
    const std::map<std::pair<int, int>, double>& scores,
    const std::vector<std::vector<int>>& pred_threads,
    const std::vector<std::vector<int>>& gt_threads, int shot_count,
    double epsilon) {
  if (shot_count < 2)
    throw Error("thread_metrics: need at least two shots");

  // Cluster id per shot; shots outside the listed clusters are singletons.
  auto labels_of = [&](const std::vector<std::vector<int>>& threads,
                       const char* what) {
    std::vector<int> label(static_cast<std::size_t>(shot_count), -1);
    int next = 0;
    for (const auto& cluster : threads) {
      for (int shot : cluster) {
        if (shot < 0 || shot >= shot_count)
          throw Error(std::string("thread_metrics: ") + what +
                      " references shot " + std::to_string(shot) +
                      " outside 0.." + std::to_string(shot_count - 1));
        if (label[static_cast<std::size_t>(shot)] != -1)
          throw Error(std::string("thread_metrics: ") + what +
                      " lists shot " + std::to_string(shot) + " twice");
        label[static_cast<std::size_t>(shot)] = next;
      }
      ++next;
    }
    for (auto& l : label)
      if (l == -1) l = next++;
    return label;
  };
  const auto gt_label = labels_of(gt_threads, "gt_threads");
  const auto pred_label = labels_of(pred_threads, "pred_threads");

  struct Pair {
    int i, j;
    double score;
    bool positive;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < shot_count; ++i) {
    for (int j = i + 1; j < shot_count; ++j) {
      auto it = scores.find({i, j});
      if (it == scores.end())
        throw Error("thread_metrics: missing score for pair (" +
                    std::to_string(i) + ", " + std::to_string(j) + ")");
      pairs.push_back({i, j, it->second,
                       gt_label[static_cast<std::size_t>(i)] ==
                           gt_label[static_cast<std::size_t>(j)]});
    }
  }

  ThreadMetrics m;
  int tp = 0;
  for (const auto& p : pairs) {
    if (p.positive) ++m.positives;
    if (p.score > epsilon) {
      ++m.predicted_positives;
      if (p.positive) ++tp;
    }
  }
  m.precision = m.predicted_positives == 0
                    ? 1.0
                    : static_cast<double>(tp) / m.predicted_positives;
  m.recall =
      m.positives == 0 ? 1.0 : static_cast<double>(tp) / m.positives;

  if (m.positives == 0) {
    m.ap = 1.0;
  } else {
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });
    int cum_tp = 0;
    double ap = 0.0;
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      if (!pairs[r].positive) continue;
      ++cum_tp;
      ap += static_cast<double>(cum_tp) / static_cast<double>(r + 1);
    }
    m.ap = ap / m.positives;
  }

  // Purity: each predicted cluster votes with its best GT overlap.
  std::map<int, std::vector<int>> pred_clusters;
  for (int s = 0; s < shot_count; ++s)
    pred_clusters[pred_label[static_cast<std::size_t>(s)]].push_back(s);
  double overlap_sum = 0.0;
  for (const auto& [cid, members] : pred_clusters) {
    std::map<int, int> gt_counts;
    int best = 0;
    for (int s : members)
      best = std::max(best, ++gt_counts[gt_label[
                                static_cast<std::size_t>(s)]]);
    overlap_sum += best;
  }
  m.wcp = overlap_sum / static_cast<double>(shot_count);
  return m;
}

}  // namespace shotad
