// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared synthetic fixture: two quadrant-painted clips with a known shot,
// thread, scale, and cast layout, plus five annotated AD events.

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "shotad/corpus.hpp"
#include "shotad/video.hpp"

namespace shotad::testfix {

// Paints the four quadrants with face-track palette colors 0..3 (setup A)
// or 4..7 (setup B). Two frames from different setups share no quadrant
// color, which the mock feature extractor maps to a flat cost volume.
void paint_quadrants(Image& img, bool setup_b);

// One shot per entry; each shot is frames_per_shot frames of its setup.
std::unique_ptr<FrameSource> make_clip_source(
    const std::vector<bool>& shot_setups, int frames_per_shot, double fps,
    int width = 128, int height = 96);

// Writes clip_a.y4m (shots ABAB), clip_b.y4m (shots AB), face tracks for
// clip_a, and manifest.jsonl with five ground-truth AD events. Returns the
// manifest path.
std::string write_fixture(const std::filesystem::path& dir);

// Mock-backend run config for the fixture; `extra` is merged on top as raw
// JSON object text (e.g. R"({"jobs":3})").
std::string fixture_config(const std::string& manifest_path,
                           const std::string& run_dir,
                           const std::string& extra = "");

// Scratch directory under the system temp root, deleted on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace shotad::testfix
