// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "shotad/errors.hpp"

namespace shotad {

using json = nlohmann::ordered_json;

DatasetProfile builtin_profile(DatasetName name) {
  DatasetProfile p;
  p.name = name;
  switch (name) {
    case DatasetName::kCmdAd:
      p.video_type = VideoType::kMovie;
      p.verb_list = {"look", "turn", "take", "hold", "pull", "walk", "run",
                     "watch", "stare", "grab", "fall", "get", "go", "open",
                     "smile"};
      p.speed_factor = 0.275;
      p.example_sentences = {
          "He slams the car door and strides across the lot.",
          "She glances over her shoulder, then slips through the gate.",
          "A convoy of trucks rolls down the dusty highway.",
          "He grabs the rifle and ducks behind the overturned table.",
          "She pulls the letter from the drawer.",
          "He smiles faintly and turns back to the window.",
          "They run along the rooftop toward the fire escape.",
          "The detective studies the photographs pinned to the wall.",
          "She falls to her knees beside the wreckage.",
          "He opens the briefcase and counts the money.",
      };
      break;
    case DatasetName::kTvAd:
      p.video_type = VideoType::kTvSeries;
      p.verb_list = {"look", "walk", "turn", "stare", "take", "hold", "smile",
                     "leave", "pull", "watch", "open", "go", "step", "get",
                     "enter"};
      p.speed_factor = 0.2695;
      p.example_sentences = {
          "Back at the flat, she hangs her coat by the door.",
          "He steps into the lift and presses a button.",
          "The nurse wheels a trolley down the corridor.",
          "She stares at the test results on the desk.",
          "He leaves the pub and walks into the rain.",
          "In the kitchen, she stirs a pot on the stove.",
          "The brothers exchange a look across the table.",
          "She enters the office and drops her bag on a chair.",
          "He holds up the photograph to the light.",
          "They watch the ambulance pull away.",
      };
      break;
    case DatasetName::kMadEval:
      p.video_type = VideoType::kMovie;
      p.verb_list = {"look", "turn", "sit", "walk", "take", "stand", "watch",
                     "hold", "pull", "see", "go", "open", "smile", "run",
                     "get"};
      p.speed_factor = 0.5102;
      p.example_sentences = {
          "He sits at the bar and nurses a drink.",
          "She walks through the crowded station.",
          "The boy stands at the edge of the pool.",
          "He takes the envelope from his pocket.",
          "Rain streaks the windscreen as the car idles.",
          "She looks up at the towering glass building.",
          "He opens the fridge and peers inside.",
          "The dog trots along the fence line.",
          "She holds the baby close and hums.",
          "He turns the key and the engine sputters.",
      };
      break;
    case DatasetName::kCustom:
      p.video_type = VideoType::kMovie;
      p.speed_factor = 0.3;
      break;
  }
  return p;
}

std::string profile_name(DatasetName name) {
  switch (name) {
    case DatasetName::kCmdAd: return "CMD-AD";
    case DatasetName::kTvAd: return "TV-AD";
    case DatasetName::kMadEval: return "MAD-Eval";
    case DatasetName::kCustom: return "custom";
  }
  throw Error("unreachable profile name");
}

DatasetProfile profile_by_name(const std::string& name) {
  if (name == "CMD-AD") return builtin_profile(DatasetName::kCmdAd);
  if (name == "TV-AD") return builtin_profile(DatasetName::kTvAd);
  if (name == "MAD-Eval") return builtin_profile(DatasetName::kMadEval);
  if (name == "custom") return builtin_profile(DatasetName::kCustom);
  throw ConfigError("unknown dataset profile: " + name);
}

std::string video_type_name(VideoType t) {
  return t == VideoType::kMovie ? "movie" : "TV series";
}

const VideoClip* Manifest::find_clip(const std::string& clip_id) const {
  for (const auto& c : clips)
    if (c.clip_id == clip_id) return &c;
  return nullptr;
}

std::vector<const ADEvent*> Manifest::events_for_clip(
    const std::string& clip_id) const {
  std::vector<const ADEvent*> out;
  for (const auto& e : events)
    if (e.clip_id == clip_id) out.push_back(&e);
  return out;
}

namespace {

VideoClip parse_clip(const json& j, int line_no) {
  VideoClip c;
  try {
    c.clip_id = j.at("clip_id").get<std::string>();
    c.path = j.at("path").get<std::string>();
    c.fps = j.at("fps").get<double>();
    c.duration = j.at("duration").get<double>();
    if (j.contains("face_tracks"))
      c.face_tracks_path = j.at("face_tracks").get<std::string>();
    if (j.contains("gt_threads"))
      c.gt_threads = j.at("gt_threads").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw ValidationError("manifest line " + std::to_string(line_no) + ": " +
                          e.what());
  }
  if (c.fps <= 0 || c.duration <= 0)
    throw ValidationError("manifest line " + std::to_string(line_no) +
                          ": fps and duration must be positive");
  return c;
}

ADEvent parse_event(const json& j, int line_no) {
  ADEvent e;
  try {
    e.ad_id = j.at("ad_id").get<std::string>();
    e.clip_id = j.at("clip_id").get<std::string>();
    e.start = j.at("start").get<double>();
    e.end = j.at("end").get<double>();
    if (j.contains("gt_text")) e.gt_text = j.at("gt_text").get<std::string>();
    if (j.contains("gt_actions"))
      e.gt_actions = j.at("gt_actions").get<std::vector<std::string>>();
    if (j.contains("gt_characters"))
      e.gt_characters = j.at("gt_characters").get<std::vector<std::string>>();
    if (j.contains("cast")) {
      for (const auto& m : j.at("cast")) {
        CastMember cm;
        cm.name = m.at("name").get<std::string>();
        cm.track_id = m.at("track_id").get<int>();
        e.cast.push_back(cm);
      }
    }
  } catch (const json::exception& ex) {
    throw ValidationError("manifest line " + std::to_string(line_no) + ": " +
                          ex.what());
  }
  return e;
}

}  // namespace

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  Manifest m;
  std::string line;
  int line_no = 0;
  std::vector<std::pair<ADEvent, int>> pending;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": " + e.what());
    }
    if (!j.is_object())
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": expected an object");
    if (j.contains("path")) {
      m.clips.push_back(parse_clip(j, line_no));
    } else if (j.contains("ad_id")) {
      pending.emplace_back(parse_event(j, line_no), line_no);
    } else {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": neither a clip (path) nor an AD (ad_id) row");
    }
  }
  // Interval and reference checks run after all clips are known so row
  // order in the file does not matter.
  for (auto& [e, ln] : pending) {
    const VideoClip* clip = m.find_clip(e.clip_id);
    if (!clip || e.start < 0 || e.start >= e.end || e.end > clip->duration) {
      ++m.rejected;
      continue;
    }
    m.events.push_back(std::move(e));
  }
  std::stable_sort(m.events.begin(), m.events.end(),
                   [](const ADEvent& a, const ADEvent& b) {
                     if (a.clip_id != b.clip_id) return a.clip_id < b.clip_id;
                     return a.start < b.start;
                   });
  return m;
}

std::string manifest_to_jsonl(const Manifest& m) {
  std::ostringstream out;
  for (const auto& c : m.clips) {
    json j;
    j["clip_id"] = c.clip_id;
    j["path"] = c.path;
    j["fps"] = c.fps;
    j["duration"] = c.duration;
    if (!c.face_tracks_path.empty()) j["face_tracks"] = c.face_tracks_path;
    if (!c.gt_threads.empty()) j["gt_threads"] = c.gt_threads;
    out << j.dump() << "\n";
  }
  for (const auto& e : m.events) {
    json j;
    j["ad_id"] = e.ad_id;
    j["clip_id"] = e.clip_id;
    j["start"] = e.start;
    j["end"] = e.end;
    if (!e.gt_text.empty()) j["gt_text"] = e.gt_text;
    if (!e.gt_actions.empty()) j["gt_actions"] = e.gt_actions;
    if (!e.gt_characters.empty()) j["gt_characters"] = e.gt_characters;
    if (!e.cast.empty()) {
      json cast = json::array();
      for (const auto& cm : e.cast)
        cast.push_back({{"name", cm.name}, {"track_id", cm.track_id}});
      j["cast"] = cast;
    }
    out << j.dump() << "\n";
  }
  return out.str();
}

void write_manifest(const Manifest& m, const std::string& path) {
  atomic_write_file(path, manifest_to_jsonl(m));
}

std::vector<FaceBox> load_face_tracks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open face tracks: " + path);
  std::vector<FaceBox> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      FaceBox b;
      b.frame = j.at("frame").get<int>();
      b.track_id = j.at("track_id").get<int>();
      b.x = j.at("x").get<double>();
      b.y = j.at("y").get<double>();
      b.w = j.at("w").get<double>();
      b.h = j.at("h").get<double>();
      out.push_back(b);
    } catch (const json::exception& e) {
      throw ValidationError("face tracks line " + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
  return out;
}

namespace {

struct StageFile {
  const char* stage;
  const char* file;
};

constexpr StageFile kStageFiles[] = {
    {"ingest", "manifest.jsonl"},   {"shots", "shots.jsonl"},
    {"context", "context.jsonl"},   {"threads", "threads.jsonl"},
    {"scales", "scales.jsonl"},     {"stage1", "stage1.jsonl"},
    {"stage2", "stage2.jsonl"},     {"select", "selected.jsonl"},
    {"score-actions", "action_scores.jsonl"},
    {"eval", "eval.json"},          {"report", "report.txt"},
};

const char* stage_file(const std::string& stage) {
  for (const auto& s : kStageFiles)
    if (stage == s.stage) return s.file;
  throw Error("unknown stage: " + stage);
}

}  // namespace

RunStore::RunStore(std::string root) : root_(std::move(root)) {
  if (root_.empty()) throw Error("RunStore: empty root");
}

std::string RunStore::artifact_path(const std::string& stage) const {
  return root_ + "/artifacts/" + stage_file(stage);
}

std::string RunStore::log_path(const std::string& name) const {
  return root_ + "/logs/" + name;
}

bool RunStore::is_fresh(const std::string& stage,
                        const std::string& cache_key) const {
  namespace fs = std::filesystem;
  const std::string art = artifact_path(stage);
  const std::string key = art + ".key";
  std::error_code ec;
  if (!fs::exists(art, ec) || !fs::exists(key, ec)) return false;
  return trim(read_text_file(key)) == cache_key;
}

void RunStore::persist_stage(const std::string& stage,
                             const std::string& payload,
                             const std::string& cache_key) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  const std::string art = artifact_path(stage);
  atomic_write_file(art, payload);
  atomic_write_file(art + ".key", cache_key + "\n");
}

std::string RunStore::load_stage(const std::string& stage) const {
  const std::string art = artifact_path(stage);
  if (!std::filesystem::exists(art))
    throw MissingArtifactError(stage, "missing artifact for stage '" + stage +
                                          "': " + art);
  return read_text_file(art);
}

bool RunStore::has_stage(const std::string& stage) const {
  return std::filesystem::exists(artifact_path(stage));
}

void RunStore::append_log(const std::string& name, const std::string& line) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  namespace fs = std::filesystem;
  const fs::path p = log_path(name);
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::app);
  if (!out) throw IoError("cannot append log: " + p.string());
  out << line << "\n";
}

std::string RunStore::stage_hash(const std::string& stage) const {
  return hex64(fnv1a(load_stage(stage)));
}

CacheKeyBuilder::CacheKeyBuilder(const std::string& stage)
    : h_(fnv1a(stage)) {}

CacheKeyBuilder& CacheKeyBuilder::field(const std::string& name,
                                        const std::string& value) {
  h_ = fnv1a("\x1f", h_);
  h_ = fnv1a(name, h_);
  h_ = fnv1a("=", h_);
  h_ = fnv1a(value, h_);
  return *this;
}

CacheKeyBuilder& CacheKeyBuilder::field(const std::string& name,
                                        double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return field(name, std::string(buf));
}

CacheKeyBuilder& CacheKeyBuilder::field(const std::string& name,
                                        std::int64_t value) {
  return field(name, std::to_string(value));
}

std::string CacheKeyBuilder::finish() const { return hex64(h_); }

}  // namespace shotad
