// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "shotad/util.hpp"

namespace shotad {

struct CastMember {
  std::string name;
  int track_id = -1;
};

struct FaceBox {
  int frame = 0;
  int track_id = 0;
  // Normalized to [0,1] relative to frame width/height.
  double x = 0, y = 0, w = 0, h = 0;
};

struct VideoClip {
  std::string clip_id;
  std::string path;
  double fps = 0;
  double duration = 0;
  std::string face_tracks_path;            // optional sidecar
  std::vector<std::vector<int>> gt_threads;  // optional, for thread eval
};

struct ADEvent {
  std::string ad_id;
  std::string clip_id;
  double start = 0;  // t_A
  double end = 0;    // t_B
  std::string gt_text;
  std::vector<std::string> gt_actions;      // character-free, precomputed wins
  std::vector<std::string> gt_characters;
  std::vector<CastMember> cast;

  bool has_gt() const { return !gt_text.empty(); }
};

enum class DatasetName { kCmdAd, kTvAd, kMadEval, kCustom };
enum class VideoType { kMovie, kTvSeries };

struct DatasetProfile {
  DatasetName name = DatasetName::kCustom;
  VideoType video_type = VideoType::kMovie;
  std::vector<std::string> verb_list;
  double speed_factor = 0;  // seconds per word
  std::vector<std::string> example_sentences;
};

DatasetProfile builtin_profile(DatasetName name);
DatasetProfile profile_by_name(const std::string& name);
std::string profile_name(DatasetName name);
std::string video_type_name(VideoType t);

struct Manifest {
  std::vector<VideoClip> clips;
  std::vector<ADEvent> events;  // sorted by (clip_id, start)
  int rejected = 0;             // records dropped for invariant violations

  const VideoClip* find_clip(const std::string& clip_id) const;
  std::vector<const ADEvent*> events_for_clip(const std::string& clip_id) const;
};

// One JSON object per line. Clip rows carry "path"; AD rows carry "ad_id".
Manifest load_manifest(const std::string& path);
std::string manifest_to_jsonl(const Manifest& m);
void write_manifest(const Manifest& m, const std::string& path);

std::vector<FaceBox> load_face_tracks(const std::string& path);

// Artifact store for one run. Artifacts live under <root>/artifacts, logs
// (transcripts, call stats) under <root>/logs so reports and determinism
// checks can hash artifacts alone.
class RunStore {
 public:
  explicit RunStore(std::string root);

  const std::string& root() const { return root_; }
  std::string artifact_path(const std::string& stage) const;
  std::string log_path(const std::string& name) const;

  // True when the stage artifact exists and was produced under `cache_key`.
  bool is_fresh(const std::string& stage, const std::string& cache_key) const;

  void persist_stage(const std::string& stage, const std::string& payload,
                     const std::string& cache_key);
  std::string load_stage(const std::string& stage) const;
  bool has_stage(const std::string& stage) const;

  void append_log(const std::string& name, const std::string& line);

  // Content hash of a stage artifact, used to key downstream stages.
  std::string stage_hash(const std::string& stage) const;

 private:
  std::string root_;
  mutable std::mutex write_mutex_;
};

// Cache keys chain FNV-1a over the stage name, the config fields the stage
// depends on, and the upstream artifact hashes.
class CacheKeyBuilder {
 public:
  explicit CacheKeyBuilder(const std::string& stage);
  CacheKeyBuilder& field(const std::string& name, const std::string& value);
  CacheKeyBuilder& field(const std::string& name, double value);
  CacheKeyBuilder& field(const std::string& name, std::int64_t value);
  std::string finish() const;

 private:
  std::uint64_t h_;
};

}  // namespace shotad
