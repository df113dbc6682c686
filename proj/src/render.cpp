#include "urplan/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace urplan {

namespace {

void draw_dot(Image& img, Cell c, int radius, Rgb color) {
  for (int r = c.row - radius; r <= c.row + radius; ++r) {
    for (int q = c.col - radius; q <= c.col + radius; ++q) {
      if (r < 0 || q < 0 || r >= img.height() || q >= img.width()) continue;
      const int dr = r - c.row;
      const int dq = q - c.col;
      if (dr * dr + dq * dq <= radius * radius) img.set(r, q, color);
    }
  }
}

}  // namespace

Image render_overlay(const ProbGrid& base, const std::vector<std::vector<Cell>>& paths,
                     const OverlayMarkers& markers) {
  Image img(base.width(), base.height());
  for (int r = 0; r < base.height(); ++r) {
    for (int c = 0; c < base.width(); ++c) {
      const auto v = static_cast<std::uint8_t>(std::lround(base.at({r, c}) * 255.0));
      img.set(r, c, {v, v, v});
    }
  }
  for (const auto& path : paths) {
    for (const Cell c : path) {
      if (!base.in_bounds(c)) throw std::invalid_argument("path cell " + to_string(c) + " out of bounds");
      img.set(c.row, c.col, kPathColor);
    }
  }
  const int radius = markers.dot_radius >= 0 ? markers.dot_radius
                                             : std::min(base.width(), base.height()) / 100;
  if (markers.start) draw_dot(img, *markers.start, radius, kStartColor);
  if (markers.goal) draw_dot(img, *markers.goal, radius, kGoalColor);
  return img;
}

void save_image(const Image& image, const std::filesystem::path& path) {
  std::vector<std::uint8_t> raster;
  raster.reserve(image.pixels().size() * 3);
  for (const Rgb p : image.pixels()) {
    raster.push_back(p.r);
    raster.push_back(p.g);
    raster.push_back(p.b);
  }
  if (path.extension() == ".png") {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width());
    png.height = static_cast<png_uint_32>(image.height());
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.c_str(), 0, raster.data(), 0, nullptr)) {
      throw MapIoError("cannot write " + path.string() + ": " + png.message);
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MapIoError("cannot write " + path.string());
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!out) throw MapIoError("write failed: " + path.string());
}

}  // namespace urplan
