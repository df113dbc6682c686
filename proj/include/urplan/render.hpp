// Overlay rendering: probability map in grayscale, paths in green, red start
// dot and blue goal dot.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "urplan/grid.hpp"

namespace urplan {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

class Image {
 public:
  Image(int width, int height) : width_(width), height_(height), px_(static_cast<std::size_t>(width * height)) {}

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] Rgb at(int row, int col) const { return px_[static_cast<std::size_t>(row * width_ + col)]; }
  void set(int row, int col, Rgb c) { px_[static_cast<std::size_t>(row * width_ + col)] = c; }
  [[nodiscard]] const std::vector<Rgb>& pixels() const noexcept { return px_; }

 private:
  int width_;
  int height_;
  std::vector<Rgb> px_;
};

inline constexpr Rgb kPathColor{0, 200, 0};
inline constexpr Rgb kStartColor{230, 0, 0};
inline constexpr Rgb kGoalColor{0, 0, 230};

struct OverlayMarkers {
  std::optional<Cell> start;
  std::optional<Cell> goal;
  int dot_radius = -1;  // -1 picks min(width, height) / 100
};

/// One pixel per cell. Throws std::invalid_argument if a path leaves the grid.
Image render_overlay(const ProbGrid& base, const std::vector<std::vector<Cell>>& paths,
                     const OverlayMarkers& markers);

/// PNG for a ".png" extension, binary PPM otherwise. Throws MapIoError.
void save_image(const Image& image, const std::filesystem::path& path);

}  // namespace urplan
