#include <doctest.h>

#include <fstream>
#include <iterator>

#include "test_support.hpp"
#include "urplan/render.hpp"

using namespace urplan;
using namespace urplan::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("background is the probability map in grayscale") {
  const ProbGrid g(3, 2, std::vector<double>{0.0, 0.5, 1.0, 0.25, 0.75, 1e-6});
  const Image img = render_overlay(g, {}, {});
  CHECK(img.width() == 3);
  CHECK(img.height() == 2);
  CHECK(img.at(0, 0) == Rgb{0, 0, 0});
  CHECK(img.at(0, 1) == Rgb{128, 128, 128});
  CHECK(img.at(0, 2) == Rgb{255, 255, 255});
  CHECK(img.at(1, 0) == Rgb{64, 64, 64});
  CHECK(img.at(1, 1) == Rgb{191, 191, 191});
  CHECK(img.at(1, 2) == Rgb{0, 0, 0});
}

TEST_CASE("an empty path leaves the background; dots still appear") {
  const ProbGrid g(6, 6, 1.0);
  OverlayMarkers m;
  m.start = Cell{1, 1};
  m.goal = Cell{4, 4};
  const Image img = render_overlay(g, {{}}, m);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      Rgb want{255, 255, 255};
      if (r == 1 && c == 1) want = kStartColor;
      if (r == 4 && c == 4) want = kGoalColor;
      CHECK(img.at(r, c) == want);
    }
  }
}

TEST_CASE("a one-cell path colors exactly one pixel") {
  const ProbGrid g(4, 4, 0.2);
  const Image img = render_overlay(g, {{{2, 3}}}, {});
  int green = 0;
  for (const Rgb p : img.pixels()) green += p == kPathColor;
  CHECK(green == 1);
  CHECK(img.at(2, 3) == kPathColor);
}

TEST_CASE("hand-built overlay with radius-1 dots") {
  // 7 wide, 5 tall; a diagonal then horizontal path; dots drawn over the path.
  const ProbGrid g(7, 5, 0.4);
  const std::vector<Cell> path{{0, 0}, {1, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 5}, {4, 6}};
  OverlayMarkers m;
  m.start = path.front();
  m.goal = path.back();
  m.dot_radius = 1;
  const Image img = render_overlay(g, {path}, m);

  const Rgb bg{102, 102, 102};
  Image want(7, 5);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 7; ++c) want.set(r, c, bg);
  }
  for (const Cell c : path) want.set(c.row, c.col, kPathColor);
  // Radius-1 disk: the center and its 4-neighbors, clipped at the border.
  for (const Cell c : std::vector<Cell>{{0, 0}, {0, 1}, {1, 0}}) want.set(c.row, c.col, kStartColor);
  for (const Cell c : std::vector<Cell>{{4, 6}, {3, 6}, {4, 5}}) want.set(c.row, c.col, kGoalColor);
  CHECK(img.pixels() == want.pixels());
}

TEST_CASE("default dot radius scales with the map") {
  const ProbGrid g(300, 200, 1.0);
  OverlayMarkers m;
  m.start = Cell{100, 100};
  const Image img = render_overlay(g, {}, m);
  CHECK(img.at(100, 102) == kStartColor);  // radius 2
  CHECK(img.at(100, 103) == Rgb{255, 255, 255});
  CHECK(img.at(101, 101) == kStartColor);
  CHECK(img.at(102, 102) == Rgb{255, 255, 255});
}

TEST_CASE("out-of-bounds path cells throw") {
  const ProbGrid g(4, 4, 1.0);
  CHECK_THROWS_AS(render_overlay(g, {{{0, 0}, {0, 4}}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(render_overlay(g, {{{-1, 0}}}, {}), std::invalid_argument);
}

TEST_CASE("save_image writes PPM and PNG; unwritable paths throw") {
  TempDir dir("render");
  Image img(2, 1);
  img.set(0, 0, {1, 2, 3});
  img.set(0, 1, {250, 251, 252});
  save_image(img, dir.file("x.ppm"));
  CHECK(slurp(dir.file("x.ppm")) == std::string("P6\n2 1\n255\n\x01\x02\x03\xfa\xfb\xfc", 17));

  save_image(img, dir.file("x.png"));
  const std::string png = slurp(dir.file("x.png"));
  REQUIRE(png.size() > 8);
  CHECK(png.substr(0, 8) == std::string("\x89PNG\r\n\x1a\n", 8));

  CHECK_THROWS_AS(save_image(img, dir.file("missing/x.png")), MapIoError);
  CHECK_THROWS_AS(save_image(img, dir.file("missing/x.ppm")), MapIoError);
}
