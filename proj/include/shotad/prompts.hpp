// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shotad/context.hpp"
#include "shotad/corpus.hpp"
#include "shotad/scales.hpp"

namespace shotad {

struct PromptBundle {
  std::string system_text;  // may embed "{}" as the user-message slot
  std::string user_text;
  bool expects_json = false;
  std::vector<std::string> answer_keys;  // required keys when expects_json

  std::uint64_t hash() const;
};

// ". Possible characters: Name (red), ..." from the cast list; the color
// names follow the face-track palette. Empty cast gives an empty string.
std::string make_char_text(const std::vector<CastMember>& cast);

// "[Shot 2, Shot 3]" over the window's current labels.
std::string render_key_shots(const std::vector<int>& current_labels);

// Python-style list rendering: ['look', 'turn', ...].
std::string render_verb_list(const std::vector<std::string>& verbs);

// Word budget for a given interval length: int(duration / speed_factor + 1).
long long stage2_word_limit(double duration, double speed_factor);

PromptBundle build_stage1(const ContextWindow& window, Factor factor,
                          const std::string& thread_fragment,
                          VideoType video_type, const std::string& char_text);

// `seed` drives the deterministic draw of 10 example sentences from the
// profile pool; a pool of exactly 10 is passed through in order.
PromptBundle build_stage2(const std::string& stage1_text, double duration,
                          const DatasetProfile& profile, bool assistant_mode,
                          std::uint64_t seed);

PromptBundle build_char_removal(const std::string& gt_text);
PromptBundle build_action_split(const std::string& gt_text);
PromptBundle build_llm_action_metric(const std::string& gt_action,
                                     const std::string& prediction);

// 1..5 reference-vs-prediction judge used by the evaluation suite. Not an
// appendix listing; kept here so every prompt lives in one module.
PromptBundle build_ad_eval_judge(const std::string& reference,
                                 const std::string& prediction);

}  // namespace shotad
