// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "fixture.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>

#include "json.hpp"
#include "shotad/context.hpp"
#include "shotad/util.hpp"

namespace shotad::testfix {

using nlohmann::ordered_json;

void paint_quadrants(Image& img, bool setup_b) {
  const int base = setup_b ? 4 : 0;
  const int hw = img.width / 2;
  const int hh = img.height / 2;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int q = (y < hh ? 0 : 2) + (x < hw ? 0 : 1);
      img.set(x, y, color_for_track(base + q));
    }
  }
}

std::unique_ptr<FrameSource> make_clip_source(
    const std::vector<bool>& shot_setups, int frames_per_shot, double fps,
    int width, int height) {
  const auto setups = shot_setups;
  const int total = static_cast<int>(setups.size()) * frames_per_shot;
  return std::make_unique<SyntheticFrameSource>(
      width, height, total, fps, [setups, frames_per_shot](int i, Image& img) {
        img = Image(img.width, img.height);
        paint_quadrants(
            img, setups[static_cast<std::size_t>(i / frames_per_shot)]);
      });
}

namespace {

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  atomic_write_file(path, join(lines, "\n") + "\n");
}

}  // namespace

std::string write_fixture(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  // clip_a: ABAB thread structure, 4 shots x 2 s at 20 fps.
  const auto clip_a = make_clip_source({false, true, false, true}, 40, 20.0);
  write_y4m(dir / "clip_a.y4m", *clip_a);

  // clip_b: one A shot then one B shot; no shared setup, no threads.
  const auto clip_b = make_clip_source({false, true}, 40, 20.0);
  write_y4m(dir / "clip_b.y4m", *clip_b);

  // Faces on clip_a only. Shots 0..1: Alice dominates at 0.3 height
  // (class 1, facial-expression factor). Shots 2..3: only Bob at 0.15
  // (class 2, key-object factor). clip_b has no faces (class 4).
  std::vector<std::string> face_lines;
  for (int f = 0; f < 160; ++f) {
    if (f < 80) {
      face_lines.push_back(ordered_json{{"frame", f},
                                        {"track_id", 0},
                                        {"x", 0.1},
                                        {"y", 0.2},
                                        {"w", 0.2},
                                        {"h", 0.3}}
                               .dump());
      face_lines.push_back(ordered_json{{"frame", f},
                                        {"track_id", 1},
                                        {"x", 0.6},
                                        {"y", 0.3},
                                        {"w", 0.08},
                                        {"h", 0.1}}
                               .dump());
    } else {
      face_lines.push_back(ordered_json{{"frame", f},
                                        {"track_id", 1},
                                        {"x", 0.5},
                                        {"y", 0.25},
                                        {"w", 0.1},
                                        {"h", 0.15}}
                               .dump());
    }
  }
  write_lines(dir / "clip_a_faces.jsonl", face_lines);

  const std::string path_a = (dir / "clip_a.y4m").string();
  const std::string path_b = (dir / "clip_b.y4m").string();
  const std::string faces_a = (dir / "clip_a_faces.jsonl").string();

  const ordered_json cast_ab = ordered_json::array(
      {{{"name", "Alice"}, {"track_id", 0}}, {{"name", "Bob"}, {"track_id", 1}}});
  const ordered_json cast_cd = ordered_json::array(
      {{{"name", "Carol"}, {"track_id", 2}}, {{"name", "Dan"}, {"track_id", 3}}});

  std::vector<std::string> rows;
  rows.push_back(ordered_json{{"clip_id", "clip_a"},
                              {"path", path_a},
                              {"fps", 20.0},
                              {"duration", 8.0},
                              {"face_tracks", faces_a},
                              {"gt_threads", {{0, 2}, {1, 3}}}}
                     .dump());
  rows.push_back(ordered_json{{"clip_id", "clip_b"},
                              {"path", path_b},
                              {"fps", 20.0},
                              {"duration", 4.0},
                              {"gt_threads", {{0}, {1}}}}
                     .dump());
  rows.push_back(
      ordered_json{{"ad_id", "ad_a1"},
                   {"clip_id", "clip_a"},
                   {"start", 1.0},
                   {"end", 3.2},
                   {"gt_text", "Alice hands Bob a letter and turns to the window."},
                   {"gt_actions",
                    {"She hands him a letter.", "She turns to the window."}},
                   {"gt_characters", {"Alice", "Bob"}},
                   {"cast", cast_ab}}
          .dump());
  rows.push_back(ordered_json{{"ad_id", "ad_a2"},
                              {"clip_id", "clip_a"},
                              {"start", 4.5},
                              {"end", 6.0},
                              {"gt_text", "Bob opens the letter."},
                              {"gt_characters", {"Bob"}},
                              {"cast", cast_ab}}
                     .dump());
  rows.push_back(
      ordered_json{{"ad_id", "ad_a3"},
                   {"clip_id", "clip_a"},
                   {"start", 6.2},
                   {"end", 7.4},
                   {"gt_text", "Alice smiles and walks out of the room."},
                   {"gt_characters", {"Alice"}},
                   {"cast", cast_ab}}
          .dump());
  rows.push_back(ordered_json{{"ad_id", "ad_b1"},
                              {"clip_id", "clip_b"},
                              {"start", 0.5},
                              {"end", 1.8},
                              {"gt_text", "Carol stares at the test results."},
                              {"gt_characters", {"Carol"}},
                              {"cast", cast_cd}}
                     .dump());
  rows.push_back(
      ordered_json{{"ad_id", "ad_b2"},
                   {"clip_id", "clip_b"},
                   {"start", 2.2},
                   {"end", 3.6},
                   {"gt_text", "Dan leaves the room, then closes the door."},
                   {"gt_characters", {"Dan"}},
                   {"cast", cast_cd}}
          .dump());

  const auto manifest = dir / "manifest.jsonl";
  write_lines(manifest, rows);
  return manifest.string();
}

std::string fixture_config(const std::string& manifest_path,
                           const std::string& run_dir,
                           const std::string& extra) {
  ordered_json cfg{{"manifest", manifest_path},
                   {"run_dir", run_dir},
                   {"profile", "CMD-AD"},
                   {"mode", "single"},
                   {"backend", "mock"},
                   {"recall_n", 3},
                   {"jobs", 1}};
  if (!extra.empty()) {
    const ordered_json patch = ordered_json::parse(extra);
    for (const auto& [k, v] : patch.items()) cfg[k] = v;
  }
  return cfg.dump();
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("shotad-" + tag + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace shotad::testfix
