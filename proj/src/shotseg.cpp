// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/shotseg.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "shotad/errors.hpp"

namespace shotad {

using json = nlohmann::ordered_json;

std::vector<Shot> detect_shots(const FrameSource& clip,
                               const ShotParams& params) {
  const int total = clip.frame_count();
  const double fps = clip.fps();
  if (total <= 0) throw Error("detect_shots: empty clip");
  if (params.min_shot_len < 1.0 / fps)
    throw Error("detect_shots: min_shot_len below one frame period");

  // delta[i] = change from frame i-1 to frame i; delta[0] unused.
  std::vector<double> delta(static_cast<std::size_t>(total), 0.0);
  std::vector<std::uint8_t> prev, cur;
  for (int i = 0; i < total; ++i) {
    Image img = clip.frame(i);
    if (img.width > 128) img = resize_nearest(img, 128, std::max(1, img.height * 128 / img.width));
    cur = to_luma(img);
    if (i > 0) delta[static_cast<std::size_t>(i)] = mean_abs_diff(prev, cur);
    prev = std::move(cur);
  }

  // Adaptive rule: a cut at i needs delta[i] to dominate the neighbouring
  // deltas. The absolute floor of 1.0 keeps noiseless constant clips cut-free.
  std::vector<int> cuts;
  const int min_frames =
      std::max(1, static_cast<int>(std::ceil(params.min_shot_len * fps)));
  int shot_start = 0;
  for (int i = 1; i < total; ++i) {
    double acc = 0;
    int cnt = 0;
    for (int j = std::max(1, i - params.window);
         j <= std::min(total - 1, i + params.window); ++j) {
      if (j == i) continue;
      acc += delta[static_cast<std::size_t>(j)];
      ++cnt;
    }
    const double avg = cnt > 0 ? acc / cnt : 0.0;
    const double floor = std::max(avg, 1.0);
    if (delta[static_cast<std::size_t>(i)] >=
            params.adaptive_ratio_threshold * floor &&
        i - shot_start >= min_frames) {
      cuts.push_back(i);
      shot_start = i;
    }
  }

  std::vector<Shot> shots;
  int start = 0;
  auto push_shot = [&](int end_exclusive) {
    Shot s;
    s.index = static_cast<int>(shots.size());
    s.start_frame = start;
    s.end_frame = end_exclusive - 1;
    s.start_time = start / fps;
    s.end_time = end_exclusive / fps;
    shots.push_back(s);
    start = end_exclusive;
  };
  for (int cut : cuts) push_shot(cut);
  push_shot(total);
  return shots;
}

double mean_shot_duration(const std::vector<Shot>& shots) {
  if (shots.empty()) throw Error("mean_shot_duration: empty shot list");
  double acc = 0;
  for (const auto& s : shots) acc += s.end_time - s.start_time;
  return acc / static_cast<double>(shots.size());
}

std::string shots_to_json(const std::vector<Shot>& shots) {
  json arr = json::array();
  for (const auto& s : shots) {
    arr.push_back({{"index", s.index},
                   {"start_frame", s.start_frame},
                   {"end_frame", s.end_frame},
                   {"start_time", s.start_time},
                   {"end_time", s.end_time}});
  }
  return arr.dump();
}

std::vector<Shot> shots_from_json(const std::string& text) {
  std::vector<Shot> out;
  try {
    const json arr = json::parse(text);
    for (const auto& j : arr) {
      Shot s;
      s.index = j.at("index").get<int>();
      s.start_frame = j.at("start_frame").get<int>();
      s.end_frame = j.at("end_frame").get<int>();
      s.start_time = j.at("start_time").get<double>();
      s.end_time = j.at("end_time").get<double>();
      out.push_back(s);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad shot list: ") + e.what());
  }
  return out;
}

}  // namespace shotad
