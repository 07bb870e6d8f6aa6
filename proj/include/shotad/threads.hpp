// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shotad/image.hpp"
#include "shotad/shotseg.hpp"
#include "shotad/video.hpp"

namespace shotad {

// h x w x c spatial feature grid, row-major (row, column, channel).
struct FeatureMap {
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(int h_, int w_, int c_);
  int patches() const { return h * w; }
  float* at(int y, int x) {
    return data.data() + (static_cast<std::size_t>(y) * w + x) * c;
  }
  const float* at(int y, int x) const {
    return data.data() + (static_cast<std::size_t>(y) * w + x) * c;
  }
};

// Unit L2 norm per spatial element; zero vectors stay zero. Idempotent.
void normalize_features(FeatureMap& fm);

struct ThreadParams {
  int n = 5;           // mask neighbourhood, odd
  double tau = 0.1;    // softmax temperature
  double epsilon = 0.3;  // adjacency threshold
};

void validate(const ThreadParams& p);

// C[p,q] = dot(a[p], b[q]) when q lies within the n x n neighbourhood of
// p's grid position (Chebyshev distance <= n/2), else 0. N = h*w entries
// per side, row-major over (row, col).
std::vector<double> cost_volume(const FeatureMap& a, const FeatureMap& b,
                                int n);

// s = (1/N) sum_p max_q softmax_q(C[p,.] / tau). The softmax denominator
// runs over all N entries, masked zeros included.
double matching_score(const std::vector<double>& c, int n_patches, double tau);

// Minimal extraction contract the thread module needs; concrete backends
// (mock and remote) live with the other backends.
class FeatureExtractorBackend {
 public:
  virtual ~FeatureExtractorBackend() = default;
  virtual FeatureMap extract(const Image& frame) = 0;
  virtual std::string id() const = 0;
};

// Score for a pair of shots i < j: last frame of i against first frame of
// j. Frames are resized to a 224-px short side before extraction.
double shot_pair_score(const FrameSource& clip, const Shot& shot_i,
                       const Shot& shot_j, FeatureExtractorBackend& features,
                       const ThreadParams& params);

struct ThreadingResult {
  // Raw scores for ordered pairs i < j over shots 0..K-1 (local indices).
  std::map<std::pair<int, int>, double> adjacency;
  std::vector<std::vector<int>> threads;  // each ascending, ordered by head
  int n_thread = 0;
  int n_shot = 0;

  bool has_structure() const { return n_thread < n_shot; }
};

// Undirected edges where score > epsilon; threads are the connected
// components. Every shot lands in exactly one thread.
ThreadingResult cluster_threads(
    const std::map<std::pair<int, int>, double>& scores, double epsilon,
    int shot_count);

// "[Shot 0, Shot 2] share the same camera setup." per multi-shot thread,
// space-joined. Empty when there is no structure.
std::string thread_statements(const ThreadingResult& result);

// Full Stage I injection line (trailing newline included), or empty.
std::string thread_prompt_fragment(const ThreadingResult& result);

void write_feature_map(const std::filesystem::path& path,
                       const FeatureMap& fm);
FeatureMap read_feature_map(const std::filesystem::path& path);

std::string threading_to_json(const std::string& ad_id,
                              const ThreadingResult& r);
ThreadingResult threading_from_json(const std::string& text);

}  // namespace shotad
