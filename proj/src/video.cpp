// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/video.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "shotad/errors.hpp"
#include "shotad/util.hpp"

namespace shotad {
namespace {

std::uint8_t clamp_u8(int v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

// BT.601 full-range conversions, integer-exact enough for shot detection.
void rgb_to_yuv(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                std::uint8_t& y, std::uint8_t& u, std::uint8_t& v) {
  const int ri = r, gi = g, bi = b;
  y = clamp_u8((77 * ri + 150 * gi + 29 * bi) >> 8);
  u = clamp_u8(((-43 * ri - 85 * gi + 128 * bi) >> 8) + 128);
  v = clamp_u8(((128 * ri - 107 * gi - 21 * bi) >> 8) + 128);
}

void yuv_to_rgb(std::uint8_t y, std::uint8_t u, std::uint8_t v,
                std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
  const int c = y;
  const int d = u - 128;
  const int e = v - 128;
  r = clamp_u8(c + ((359 * e) >> 8));
  g = clamp_u8(c - ((88 * d + 183 * e) >> 8));
  b = clamp_u8(c + ((454 * d) >> 8));
}

}  // namespace

int FrameSource::nearest_frame(double t) const {
  const int idx = static_cast<int>(std::lround(t * fps()));
  return std::clamp(idx, 0, frame_count() - 1);
}

SyntheticFrameSource::SyntheticFrameSource(int width, int height, int frames,
                                           double fps, Painter painter)
    : width_(width),
      height_(height),
      frames_(frames),
      fps_(fps),
      painter_(std::move(painter)) {
  if (width <= 0 || height <= 0 || frames <= 0 || fps <= 0)
    throw Error("SyntheticFrameSource: bad dimensions");
}

Image SyntheticFrameSource::frame(int index) const {
  if (index < 0 || index >= frames_)
    throw Error("frame index out of range: " + std::to_string(index));
  Image img(width_, height_);
  painter_(index, img);
  return img;
}

Y4mFrameSource::Y4mFrameSource(const std::filesystem::path& path)
    : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open y4m: " + path.string());
  std::string header;
  std::getline(in, header);
  if (header.rfind("YUV4MPEG2", 0) != 0)
    throw IoError("not a y4m file: " + path.string());
  int fps_num = 0;
  int fps_den = 1;
  std::istringstream hs(header);
  std::string tok;
  hs >> tok;  // magic
  bool c444 = false;
  while (hs >> tok) {
    if (tok.size() < 2) continue;
    const char tag = tok[0];
    const std::string val = tok.substr(1);
    switch (tag) {
      case 'W': width_ = std::stoi(val); break;
      case 'H': height_ = std::stoi(val); break;
      case 'F': {
        const auto colon = val.find(':');
        if (colon == std::string::npos)
          throw IoError("bad y4m frame rate: " + path.string());
        fps_num = std::stoi(val.substr(0, colon));
        fps_den = std::stoi(val.substr(colon + 1));
        break;
      }
      case 'C': c444 = val.rfind("444", 0) == 0; break;
      default: break;  // interlacing / aspect tags ignored
    }
  }
  if (width_ <= 0 || height_ <= 0 || fps_num <= 0 || fps_den <= 0)
    throw IoError("incomplete y4m header: " + path.string());
  if (!c444) throw IoError("only C444 y4m is supported: " + path.string());
  fps_ = static_cast<double>(fps_num) / fps_den;

  const std::uint64_t frame_bytes =
      3ull * static_cast<std::uint64_t>(width_) * height_;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("FRAME", 0) != 0)
      throw IoError("bad y4m frame marker: " + path.string());
    offsets_.push_back(static_cast<std::uint64_t>(in.tellg()));
    in.seekg(static_cast<std::streamoff>(frame_bytes), std::ios::cur);
    if (!in) throw IoError("truncated y4m frame: " + path.string());
    in.peek();
    if (in.eof()) break;
  }
  if (offsets_.empty()) throw IoError("y4m has no frames: " + path.string());
}

Image Y4mFrameSource::frame(int index) const {
  if (index < 0 || index >= frame_count())
    throw Error("frame index out of range: " + std::to_string(index) +
                " in " + path_.string());
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw IoError("cannot open y4m: " + path_.string());
  const std::size_t plane = static_cast<std::size_t>(width_) * height_;
  std::vector<std::uint8_t> yuv(plane * 3);
  in.seekg(static_cast<std::streamoff>(offsets_[index]));
  in.read(reinterpret_cast<char*>(yuv.data()),
          static_cast<std::streamsize>(yuv.size()));
  if (in.gcount() != static_cast<std::streamsize>(yuv.size()))
    throw IoError("undecodable frame " + std::to_string(index) + " in " +
                  path_.string());
  Image img(width_, height_);
  for (std::size_t i = 0; i < plane; ++i) {
    std::uint8_t r, g, b;
    yuv_to_rgb(yuv[i], yuv[plane + i], yuv[2 * plane + i], r, g, b);
    img.data[i * 3] = r;
    img.data[i * 3 + 1] = g;
    img.data[i * 3 + 2] = b;
  }
  return img;
}

void write_y4m(const std::filesystem::path& path, const FrameSource& source) {
  // fps is encoded as a rational with a fixed 1000 denominator, which is
  // exact for the integer and NTSC-style rates we generate.
  const int fps_num = static_cast<int>(std::lround(source.fps() * 1000));
  std::ostringstream out;
  const Image probe = source.frame(0);
  out << "YUV4MPEG2 W" << probe.width << " H" << probe.height << " F"
      << fps_num << ":1000 Ip A1:1 C444\n";
  const std::size_t plane =
      static_cast<std::size_t>(probe.width) * probe.height;
  std::vector<std::uint8_t> yuv(plane * 3);
  for (int i = 0; i < source.frame_count(); ++i) {
    const Image img = source.frame(i);
    if (img.width != probe.width || img.height != probe.height)
      throw Error("write_y4m: frame size changed mid-stream");
    for (std::size_t p = 0; p < plane; ++p) {
      rgb_to_yuv(img.data[p * 3], img.data[p * 3 + 1], img.data[p * 3 + 2],
                 yuv[p], yuv[plane + p], yuv[2 * plane + p]);
    }
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(yuv.data()),
              static_cast<std::streamsize>(yuv.size()));
  }
  atomic_write_file(path, out.str());
}

std::unique_ptr<FrameSource> open_video(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".y4m") return std::make_unique<Y4mFrameSource>(path);
  throw IoError("unsupported video container: " + path.string());
}

}  // namespace shotad
