// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace shotad {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

// Interleaved RGB8, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, Rgb fill = {});

  std::uint8_t* px(int x, int y) {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* px(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  void set(int x, int y, Rgb c);
};

// Nearest-neighbour resize. Good enough for shot detection and the 224p
// model input; we are not in the business of pretty downscaling.
Image resize_nearest(const Image& src, int new_w, int new_h);

// Resize so the shorter side equals `short_side`, preserving aspect.
Image resize_short_side(const Image& src, int short_side);

// Per-pixel luma (Rec.601 integer approximation), row-major.
std::vector<std::uint8_t> to_luma(const Image& img);

// Mean absolute luma difference between two equally sized planes.
double mean_abs_diff(const std::vector<std::uint8_t>& a,
                     const std::vector<std::uint8_t>& b);

// 5x7 bitmap font, doubled to 10x14 per glyph at scale 2. Unknown glyphs
// render as blanks. Returns x just past the last drawn glyph.
int draw_text(Image& img, int x, int y, const std::string& text, Rgb color,
              int scale = 2);

// Filled circle plus a 1px darker rim.
void draw_circle(Image& img, int cx, int cy, int radius, Rgb color);

// Annulus of the given thickness at the given outer radius.
void draw_ring(Image& img, int cx, int cy, int radius, int thickness,
               Rgb color);

// Binary PPM (P6).
std::string ppm_bytes(const Image& img);
void write_ppm(const Image& img, const std::filesystem::path& path);
Image read_ppm(const std::filesystem::path& path);

}  // namespace shotad
