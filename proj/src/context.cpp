// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/context.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

#include "shotad/errors.hpp"

namespace shotad {

using json = nlohmann::ordered_json;

double ContextWindow::span_start() const {
  if (shots.empty()) throw Error("empty window");
  return shots.front().second.start_time;
}

double ContextWindow::span_end() const {
  if (shots.empty()) throw Error("empty window");
  return shots.back().second.end_time;
}

int ContextWindow::label_at(double t) const {
  for (const auto& [label, s] : shots) {
    if (t >= s.start_time && t < s.end_time) return label;
  }
  // A timestamp equal to the window's end belongs to the last shot.
  if (!shots.empty() && t == shots.back().second.end_time)
    return shots.back().first;
  return -1;
}

const Shot* ContextWindow::shot_by_label(int label) const {
  for (const auto& [l, s] : shots)
    if (l == label) return &s;
  return nullptr;
}

ContextWindow build_window(const std::vector<Shot>& shots, double t_a,
                           double t_b, const std::string& ad_id, int max_past,
                           int max_future) {
  if (shots.empty()) throw Error("build_window: no shots");
  if (!(t_a < t_b)) throw Error("build_window: empty interval");

  // Shot intervals are half-open [start, end): a shot is current iff it has
  // positive overlap with [t_a, t_b] or t_a sits exactly on its start.
  int first_cur = -1;
  int last_cur = -1;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const Shot& s = shots[i];
    const bool overlaps = std::max(t_a, s.start_time) < std::min(t_b, s.end_time) ||
                          (t_a >= s.start_time && t_a < s.end_time);
    if (overlaps) {
      if (first_cur < 0) first_cur = static_cast<int>(i);
      last_cur = static_cast<int>(i);
    }
  }
  if (first_cur < 0) throw Error("build_window: interval overlaps no shot");

  const int lo = std::max(0, first_cur - max_past);
  const int hi = std::min(static_cast<int>(shots.size()) - 1,
                          last_cur + max_future);
  ContextWindow w;
  w.ad_id = ad_id;
  int label = 0;
  for (int i = lo; i <= hi; ++i, ++label) {
    w.shots.emplace_back(label, shots[static_cast<std::size_t>(i)]);
    if (i < first_cur)
      w.past_labels.push_back(label);
    else if (i <= last_cur)
      w.current_labels.push_back(label);
    else
      w.future_labels.push_back(label);
  }
  return w;
}

namespace {

// Spread n samples over [a, b] at midpoints of n equal subintervals, snap
// each to the frame grid, and resolve collisions toward the nearest free
// frame inside the region. When the region holds fewer frames than n the
// leftover samples stay as duplicates.
void sample_region(double a, double b, int n, double fps, int lo_frame,
                   int hi_frame, std::set<int>& used,
                   std::vector<int>& out_frames) {
  if (n <= 0 || !(b > a)) return;
  for (int i = 0; i < n; ++i) {
    const double t = a + (i + 0.5) * (b - a) / n;
    int f = static_cast<int>(std::lround(t * fps));
    f = std::clamp(f, lo_frame, hi_frame);
    if (used.count(f)) {
      int best = -1;
      for (int d = 1; d <= hi_frame - lo_frame; ++d) {
        if (f + d <= hi_frame && !used.count(f + d)) { best = f + d; break; }
        if (f - d >= lo_frame && !used.count(f - d)) { best = f - d; break; }
      }
      if (best >= 0) f = best;
    }
    used.insert(f);
    out_frames.push_back(f);
  }
}

}  // namespace

SampledFrames sample_frames(const ContextWindow& window, double t_a,
                            double t_b, double fps, int budget_in,
                            int budget_out) {
  if (!(t_b > t_a)) throw Error("sample_frames: empty interval");
  if (budget_in < 1 || budget_out < 0)
    throw Error("sample_frames: bad budgets");
  const double w0 = window.span_start();
  const double w1 = window.span_end();
  const double span = w1 - w0;
  const double before = std::max(0.0, t_a - w0);
  const double after = std::max(0.0, w1 - t_b);

  int n_before = 0;
  int n_after = 0;
  if (before + after <= 0) {
    budget_in += budget_out;  // whole window is the interval
  } else {
    // Each flank gets its share of the whole span, floor-rounded; what the
    // floors leave over goes to the longer flank.
    n_before = static_cast<int>(budget_out * before / span);
    n_after = static_cast<int>(budget_out * after / span);
    int rest = budget_out - n_before - n_after;
    if (after >= before)
      n_after += rest;
    else
      n_before += rest;
  }

  const int first_frame = window.shots.front().second.start_frame;
  const int last_frame = window.shots.back().second.end_frame;
  auto frame_bounds = [&](double a, double b) {
    int lo = static_cast<int>(std::ceil(a * fps - 1e-9));
    int hi = static_cast<int>(std::floor(b * fps + 1e-9));
    if (hi < lo) {
      // Region thinner than one frame period: use its single nearest frame.
      lo = hi = static_cast<int>(std::lround((a + b) / 2 * fps));
    }
    lo = std::clamp(lo, first_frame, last_frame);
    hi = std::clamp(hi, first_frame, last_frame);
    return std::pair<int, int>(lo, hi);
  };

  std::set<int> used;
  std::vector<int> in_frames, out_frames;
  {
    const auto [lo, hi] = frame_bounds(t_a, t_b);
    sample_region(t_a, t_b, budget_in, fps, lo, hi, used, in_frames);
  }
  if (n_before > 0) {
    const auto [lo, hi] = frame_bounds(w0, t_a);
    sample_region(w0, t_a, n_before, fps, lo, hi, used, out_frames);
  }
  if (n_after > 0) {
    const auto [lo, hi] = frame_bounds(t_b, w1);
    sample_region(t_b, w1, n_after, fps, lo, hi, used, out_frames);
  }

  SampledFrames sf;
  sf.ad_id = window.ad_id;
  sf.inside_count = static_cast<int>(in_frames.size());
  sf.outside_count = static_cast<int>(out_frames.size());
  auto add = [&](int f) {
    SampledFrame fr;
    fr.frame = f;
    fr.t = f / fps;
    fr.shot_label = window.label_at(fr.t);
    if (fr.shot_label < 0) {
      // Snapping can land one frame period outside the span edge.
      fr.shot_label = fr.t < window.span_start()
                          ? window.shots.front().first
                          : window.shots.back().first;
    }
    sf.frames.push_back(fr);
  };
  for (int f : in_frames) add(f);
  for (int f : out_frames) add(f);
  std::sort(sf.frames.begin(), sf.frames.end(),
            [](const SampledFrame& a, const SampledFrame& b) {
              return a.t < b.t;
            });
  return sf;
}

namespace {
constexpr Rgb kPalette[] = {
    {230, 40, 40},   // red
    {40, 200, 40},   // green
    {50, 90, 235},   // blue
    {235, 220, 40},  // yellow
    {225, 50, 225},  // magenta
    {45, 210, 210},  // cyan
    {240, 140, 30},  // orange
    {150, 60, 220},  // purple
};
constexpr const char* kPaletteNames[] = {
    "red", "green", "blue", "yellow", "magenta", "cyan", "orange", "purple",
};
}  // namespace

Rgb color_for_track(int track_id) {
  if (track_id < 0) track_id = -track_id;
  return kPalette[track_id % 8];
}

std::string color_name_for_track(int track_id) {
  if (track_id < 0) track_id = -track_id;
  return kPaletteNames[track_id % 8];
}

void annotate_frame(Image& img, int shot_label,
                    const std::vector<FaceBox>& boxes_for_frame) {
  for (const auto& b : boxes_for_frame) {
    const int cx = static_cast<int>(std::lround((b.x + b.w / 2) * img.width));
    const int cy = static_cast<int>(std::lround((b.y + b.h / 2) * img.height));
    const double rr = std::max(b.w * img.width, b.h * img.height) / 2 + 3;
    const int thick = std::max(2, img.height / 80);
    draw_ring(img, cx, cy, static_cast<int>(std::lround(rr)), thick,
              color_for_track(b.track_id));
  }
  const int scale = std::max(
      1, static_cast<int>(std::lround(0.06 * img.height / 7.0)));
  const int margin = std::max(1, static_cast<int>(std::lround(0.02 * img.height)));
  const std::string text = "Shot " + std::to_string(shot_label);
  draw_text(img, margin + scale, margin + scale, text, Rgb{0, 0, 0}, scale);
  draw_text(img, margin, margin, text, Rgb{255, 255, 255}, scale);
}

std::string sampled_frames_to_json(const SampledFrames& sf,
                                   const std::vector<int>& current_labels) {
  json j;
  j["ad_id"] = sf.ad_id;
  json frames = json::array();
  for (const auto& f : sf.frames)
    frames.push_back({{"t", f.t}, {"frame", f.frame}, {"shot_label", f.shot_label}});
  j["frames"] = frames;
  j["current_labels"] = current_labels;
  j["inside_count"] = sf.inside_count;
  j["outside_count"] = sf.outside_count;
  return j.dump();
}

std::string window_to_json(const ContextWindow& w) {
  json j;
  j["ad_id"] = w.ad_id;
  json shots = json::array();
  for (const auto& [label, s] : w.shots) {
    shots.push_back({{"label", label},
                     {"index", s.index},
                     {"start_frame", s.start_frame},
                     {"end_frame", s.end_frame},
                     {"start_time", s.start_time},
                     {"end_time", s.end_time}});
  }
  j["shots"] = shots;
  j["current_labels"] = w.current_labels;
  j["past_labels"] = w.past_labels;
  j["future_labels"] = w.future_labels;
  return j.dump();
}

ContextWindow window_from_json(const std::string& text) {
  ContextWindow w;
  try {
    const json j = json::parse(text);
    w.ad_id = j.at("ad_id").get<std::string>();
    for (const auto& sj : j.at("shots")) {
      Shot s;
      s.index = sj.at("index").get<int>();
      s.start_frame = sj.at("start_frame").get<int>();
      s.end_frame = sj.at("end_frame").get<int>();
      s.start_time = sj.at("start_time").get<double>();
      s.end_time = sj.at("end_time").get<double>();
      w.shots.emplace_back(sj.at("label").get<int>(), s);
    }
    w.current_labels = j.at("current_labels").get<std::vector<int>>();
    w.past_labels = j.at("past_labels").get<std::vector<int>>();
    w.future_labels = j.at("future_labels").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad context window: ") + e.what());
  }
  return w;
}

}  // namespace shotad
