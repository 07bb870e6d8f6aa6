// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "shotad/video.hpp"

namespace shotad {

struct Shot {
  int index = 0;
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  double start_time = 0;
  double end_time = 0;
};

struct ShotParams {
  // A cut fires when the frame delta reaches this multiple of the local
  // rolling average of deltas.
  double adaptive_ratio_threshold = 3.0;
  int window = 2;          // rolling average half-width, current frame excluded
  double min_shot_len = 0.6;  // seconds; the final shot may be shorter
};

// Partition [0, frame_count) into shots. Deltas are mean absolute luma
// differences on frames downscaled to at most 128 px wide.
std::vector<Shot> detect_shots(const FrameSource& clip,
                               const ShotParams& params = {});

double mean_shot_duration(const std::vector<Shot>& shots);

std::string shots_to_json(const std::vector<Shot>& shots);
std::vector<Shot> shots_from_json(const std::string& text);

}  // namespace shotad
