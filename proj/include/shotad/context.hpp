// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shotad/corpus.hpp"
#include "shotad/image.hpp"
#include "shotad/shotseg.hpp"

namespace shotad {

// Labeled past/current/future shots around one AD interval. Local labels
// run 0..K in temporal order; current shots are those overlapping [t_A, t_B].
struct ContextWindow {
  std::string ad_id;
  std::vector<std::pair<int, Shot>> shots;  // (local_label, shot)
  std::vector<int> current_labels;
  std::vector<int> past_labels;
  std::vector<int> future_labels;

  double span_start() const;
  double span_end() const;
  // Local label of the shot containing time t, or -1.
  int label_at(double t) const;
  const Shot* shot_by_label(int label) const;
};

struct SampledFrame {
  double t = 0;
  int frame = 0;       // global frame index in the clip
  int shot_label = 0;  // local label within the window
};

struct SampledFrames {
  std::string ad_id;
  std::vector<SampledFrame> frames;  // sorted by t
  int inside_count = 0;
  int outside_count = 0;
};

ContextWindow build_window(const std::vector<Shot>& shots, double t_a,
                           double t_b, const std::string& ad_id = "",
                           int max_past = 2, int max_future = 2);

// 16-in / 16-out dynamic sampling. Outside budget is split across the two
// flanks in proportion to their share of the whole window span, remainder
// to the longer flank; an empty outside region donates its budget inside.
SampledFrames sample_frames(const ContextWindow& window, double t_a,
                            double t_b, double fps, int budget_in = 16,
                            int budget_out = 16);

// Fixed palette keyed by face-track id; names feed the cast hint text.
Rgb color_for_track(int track_id);
std::string color_name_for_track(int track_id);

// "Shot k" top-left; text height 6% of frame height, 2% margin. Circles are
// drawn around any face boxes supplied for this frame.
void annotate_frame(Image& img, int shot_label,
                    const std::vector<FaceBox>& boxes_for_frame);

std::string sampled_frames_to_json(const SampledFrames& sf,
                                   const std::vector<int>& current_labels);
std::string window_to_json(const ContextWindow& w);
ContextWindow window_from_json(const std::string& text);

}  // namespace shotad
