// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "shotad/image.hpp"

namespace shotad {

// Decodable frame sequence. Implementations must be safe for concurrent
// frame() calls on distinct indices.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual int frame_count() const = 0;
  virtual double fps() const = 0;
  virtual Image frame(int index) const = 0;

  double duration() const { return frame_count() / fps(); }
  int nearest_frame(double t) const;
};

// Procedural clip: each frame is painted by a user function. Used by tests
// and the synthetic fixture generator.
class SyntheticFrameSource : public FrameSource {
 public:
  using Painter = std::function<void(int index, Image&)>;
  SyntheticFrameSource(int width, int height, int frames, double fps,
                       Painter painter);

  int frame_count() const override { return frames_; }
  double fps() const override { return fps_; }
  Image frame(int index) const override;

 private:
  int width_;
  int height_;
  int frames_;
  double fps_;
  Painter painter_;
};

// Uncompressed YUV4MPEG2, C444 only. Every frame is materialized as RGB on
// demand from a byte offset, so clips larger than memory still work.
class Y4mFrameSource : public FrameSource {
 public:
  explicit Y4mFrameSource(const std::filesystem::path& path);

  int frame_count() const override { return static_cast<int>(offsets_.size()); }
  double fps() const override { return fps_; }
  Image frame(int index) const override;

 private:
  std::filesystem::path path_;
  int width_ = 0;
  int height_ = 0;
  double fps_ = 0;
  std::vector<std::uint64_t> offsets_;  // file offset of each frame's pixel data
};

void write_y4m(const std::filesystem::path& path, const FrameSource& source);

std::unique_ptr<FrameSource> open_video(const std::filesystem::path& path);

}  // namespace shotad
