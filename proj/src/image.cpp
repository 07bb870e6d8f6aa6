// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "shotad/errors.hpp"
#include "shotad/util.hpp"

namespace shotad {
namespace {

// 5x7 glyphs, one byte per row, low 5 bits used, MSB of the 5 on the left.
struct Glyph {
  char ch;
  std::uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'S', {0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e}},
    {'h', {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x11}},
    {'o', {0x00, 0x00, 0x0e, 0x11, 0x11, 0x11, 0x0e}},
    {'t', {0x08, 0x08, 0x1c, 0x08, 0x08, 0x09, 0x06}},
};

const Glyph* find_glyph(char c) {
  for (const auto& g : kFont)
    if (g.ch == c) return &g;
  return nullptr;
}

}  // namespace

Image::Image(int w, int h, Rgb fill) : width(w), height(h) {
  if (w < 0 || h < 0) throw Error("Image: negative dimensions");
  data.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i + 2 < data.size(); i += 3) {
    data[i] = fill.r;
    data[i + 1] = fill.g;
    data[i + 2] = fill.b;
  }
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::uint8_t* p = px(x, y);
  p[0] = c.r;
  p[1] = c.g;
  p[2] = c.b;
}

Image resize_nearest(const Image& src, int new_w, int new_h) {
  if (new_w <= 0 || new_h <= 0) throw Error("resize: bad target size");
  Image dst(new_w, new_h);
  for (int y = 0; y < new_h; ++y) {
    const int sy = std::min(
        src.height - 1,
        static_cast<int>(static_cast<std::int64_t>(y) * src.height / new_h));
    for (int x = 0; x < new_w; ++x) {
      const int sx = std::min(
          src.width - 1,
          static_cast<int>(static_cast<std::int64_t>(x) * src.width / new_w));
      std::memcpy(dst.px(x, y), src.px(sx, sy), 3);
    }
  }
  return dst;
}

Image resize_short_side(const Image& src, int short_side) {
  if (src.width <= 0 || src.height <= 0) throw Error("resize: empty image");
  if (src.width <= src.height) {
    const int h = std::max(
        1, static_cast<int>(std::lround(static_cast<double>(src.height) *
                                        short_side / src.width)));
    return resize_nearest(src, short_side, h);
  }
  const int w = std::max(
      1, static_cast<int>(std::lround(static_cast<double>(src.width) *
                                      short_side / src.height)));
  return resize_nearest(src, w, short_side);
}

std::vector<std::uint8_t> to_luma(const Image& img) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.width) *
                                img.height);
  const std::uint8_t* p = img.data.data();
  for (std::size_t i = 0; i < out.size(); ++i, p += 3) {
    const unsigned y = (77u * p[0] + 150u * p[1] + 29u * p[2]) >> 8;
    out[i] = static_cast<std::uint8_t>(y);
  }
  return out;
}

double mean_abs_diff(const std::vector<std::uint8_t>& a,
                     const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size() || a.empty())
    throw Error("mean_abs_diff: size mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<std::uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  return static_cast<double>(acc) / static_cast<double>(a.size());
}

int draw_text(Image& img, int x, int y, const std::string& text, Rgb color,
              int scale) {
  int cx = x;
  for (char c : text) {
    const Glyph* g = find_glyph(c);
    if (g) {
      for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 5; ++col) {
          if ((g->rows[row] >> (4 - col)) & 1) {
            for (int dy = 0; dy < scale; ++dy)
              for (int dx = 0; dx < scale; ++dx)
                img.set(cx + col * scale + dx, y + row * scale + dy, color);
          }
        }
      }
    }
    cx += 6 * scale;  // 5px glyph + 1px gap
  }
  return cx;
}

void draw_circle(Image& img, int cx, int cy, int radius, Rgb color) {
  const Rgb rim{static_cast<std::uint8_t>(color.r / 2),
                static_cast<std::uint8_t>(color.g / 2),
                static_cast<std::uint8_t>(color.b / 2)};
  const int r2 = radius * radius;
  const int rim2 = (radius - 1) * (radius - 1);
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 > r2) continue;
      img.set(cx + dx, cy + dy, d2 > rim2 ? rim : color);
    }
  }
}

void draw_ring(Image& img, int cx, int cy, int radius, int thickness,
               Rgb color) {
  const int outer2 = radius * radius;
  const int inner = std::max(0, radius - thickness);
  const int inner2 = inner * inner;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 <= outer2 && d2 >= inner2) img.set(cx + dx, cy + dy, color);
    }
  }
}

std::string ppm_bytes(const Image& img) {
  std::ostringstream header;
  header << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::string blob = header.str();
  blob.append(reinterpret_cast<const char*>(img.data.data()),
              img.data.size());
  return blob;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
  atomic_write_file(path, ppm_bytes(img));
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ppm: " + path.string());
  std::string magic;
  int w = 0;
  int h = 0;
  int maxv = 0;
  in >> magic >> w >> h >> maxv;
  if (magic != "P6" || w <= 0 || h <= 0 || maxv != 255)
    throw IoError("bad ppm header: " + path.string());
  in.get();  // single whitespace after maxval
  Image img(w, h);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
    throw IoError("truncated ppm: " + path.string());
  return img;
}

}  // namespace shotad
