// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <utility>

#include "doctest.h"
#include "fixture.hpp"
#include "shotad/errors.hpp"
#include "shotad/video.hpp"

using namespace shotad;

namespace {

std::unique_ptr<FrameSource> gradient_clip(int frames) {
  return std::make_unique<SyntheticFrameSource>(
      16, 12, frames, 10.0, [](int i, Image& img) {
        const auto v = static_cast<std::uint8_t>((i * 20) % 256);
        img = Image(img.width, img.height, {v, v, v});
      });
}

}  // namespace

TEST_CASE("synthetic source basics") {
  const auto src = gradient_clip(7);
  CHECK(src->frame_count() == 7);
  CHECK(src->fps() == doctest::Approx(10.0));
  CHECK(src->duration() == doctest::Approx(0.7));
  CHECK(src->frame(3).px(0, 0)[0] == 60);
}

TEST_CASE("nearest_frame clamps to valid range") {
  const auto src = gradient_clip(10);
  CHECK(src->nearest_frame(-5.0) == 0);
  CHECK(src->nearest_frame(0.0) == 0);
  CHECK(src->nearest_frame(0.44) == 4);
  CHECK(src->nearest_frame(0.45) == 5);  // lround: half away from zero
  CHECK(src->nearest_frame(99.0) == 9);
}

TEST_CASE("y4m round trip preserves every pixel") {
  shotad::testfix::TempDir tmp("y4m");
  const auto path = tmp.path() / "clip.y4m";
  const auto src = gradient_clip(5);
  write_y4m(path, *src);

  Y4mFrameSource back(path);
  REQUIRE(back.frame_count() == 5);
  CHECK(back.fps() == doctest::Approx(10.0));
  for (int i = 0; i < 5; ++i) {
    const Image a = src->frame(i);
    const Image b = back.frame(i);
    REQUIRE(a.width == b.width);
    REQUIRE(a.height == b.height);
    for (std::size_t p = 0; p < a.data.size(); ++p) {
      const int diff = int(a.data[p]) - int(b.data[p]);
      CHECK(std::abs(diff) <= 1);  // BT.601 RGB->YUV->RGB rounding
    }
  }
}

TEST_CASE("y4m rejects subsampled streams") {
  shotad::testfix::TempDir tmp("y4m");
  const auto path = tmp.path() / "sub.y4m";
  {
    std::ofstream out(path, std::ios::binary);
    out << "YUV4MPEG2 W4 H4 F10:1 Ip A1:1 C420jpeg\n";
    out << "FRAME\n";
    out << std::string(4 * 4 * 3 / 2, '\0');
  }
  CHECK_THROWS_AS(Y4mFrameSource{path}, Error);
}

TEST_CASE("open_video dispatches and validates") {
  shotad::testfix::TempDir tmp("open");
  const auto path = tmp.path() / "c.y4m";
  write_y4m(path, *gradient_clip(3));
  const auto src = open_video(path);
  CHECK(src->frame_count() == 3);
  CHECK_THROWS_AS(open_video(tmp.path() / "missing.y4m"), Error);
}

TEST_CASE("quadrant fixture paints the expected palette") {
  const auto clip = shotad::testfix::make_clip_source({false, true}, 4, 10.0);
  const Image a = clip->frame(0);
  const Image b = clip->frame(4);
  // Different setups share no quadrant color.
  for (const auto [x, y] : {std::pair{10, 10}, {100, 10}, {10, 90}, {100, 90}}) {
    const auto* pa = a.px(x, y);
    const auto* pb = b.px(x, y);
    CHECK((pa[0] != pb[0] || pa[1] != pb[1] || pa[2] != pb[2]));
  }
}
