// Traversability grid data model and map file I/O.
//
// A ProbGrid holds one traversal probability per cell in row-major order.
// GroundTruthMask holds the binary labels used by the simulator and metrics.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace urplan {

/// Lowest probability a loaded (unrevealed) cell may hold. Only revealed
/// blocks reach exactly 0.0, which is what makes them impassable.
inline constexpr double kProbabilityFloor = 1e-6;

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(Cell c);

/// Raised for unreadable or malformed map files.
class MapIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Width/height pair plus the row-major index arithmetic shared by every grid.
struct GridShape {
  int width = 0;
  int height = 0;

  [[nodiscard]] bool in_bounds(Cell c) const noexcept {
    return c.row >= 0 && c.col >= 0 && c.row < height && c.col < width;
  }
  [[nodiscard]] std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(c.col);
  }
  [[nodiscard]] Cell cell(std::size_t idx) const noexcept {
    return Cell{static_cast<int>(idx / static_cast<std::size_t>(width)),
                static_cast<int>(idx % static_cast<std::size_t>(width))};
  }
  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

class ProbGrid {
 public:
  ProbGrid() = default;
  /// Uniform grid.
  ProbGrid(int width, int height, double fill = 1.0);
  /// Throws std::invalid_argument on a size mismatch or a value outside [0,1].
  ProbGrid(int width, int height, std::vector<double> probs);

  [[nodiscard]] int width() const noexcept { return shape_.width; }
  [[nodiscard]] int height() const noexcept { return shape_.height; }
  [[nodiscard]] const GridShape& shape() const noexcept { return shape_; }
  [[nodiscard]] bool in_bounds(Cell c) const noexcept { return shape_.in_bounds(c); }

  [[nodiscard]] double at(Cell c) const { return probs_[shape_.index(c)]; }
  [[nodiscard]] double operator[](std::size_t idx) const { return probs_[idx]; }
  /// Throws std::invalid_argument for p outside [0,1].
  void set(Cell c, double p);

  [[nodiscard]] std::span<const double> values() const noexcept { return probs_; }

  /// Copy with every value raised to at least `floor`.
  [[nodiscard]] ProbGrid with_floor(double floor = kProbabilityFloor) const;

  friend bool operator==(const ProbGrid&, const ProbGrid&) = default;

 private:
  GridShape shape_;
  std::vector<double> probs_;
};

enum class Label : std::uint8_t { Blocked = 0, Traversable = 1 };

class GroundTruthMask {
 public:
  GroundTruthMask() = default;
  GroundTruthMask(int width, int height, Label fill = Label::Traversable);
  GroundTruthMask(int width, int height, std::vector<Label> labels);

  [[nodiscard]] int width() const noexcept { return shape_.width; }
  [[nodiscard]] int height() const noexcept { return shape_.height; }
  [[nodiscard]] const GridShape& shape() const noexcept { return shape_; }
  [[nodiscard]] bool in_bounds(Cell c) const noexcept { return shape_.in_bounds(c); }

  [[nodiscard]] Label at(Cell c) const { return labels_[shape_.index(c)]; }
  [[nodiscard]] bool traversable(Cell c) const { return at(c) == Label::Traversable; }
  void set(Cell c, Label l) { labels_[shape_.index(c)] = l; }

  [[nodiscard]] std::span<const Label> labels() const noexcept { return labels_; }

  friend bool operator==(const GroundTruthMask&, const GroundTruthMask&) = default;

 private:
  GridShape shape_;
  std::vector<Label> labels_;
};

// ---------------------------------------------------------------------------
// File I/O. Format is detected from the file's leading bytes: "P2"/"P5" is
// PGM, the PNG signature is PNG, anything else is parsed as CSV.

/// Grayscale value v maps to v/maxval (maxval is 255 for 8-bit images);
/// CSV values are used directly and must lie in [0,1].
ProbGrid load_prob_grid(const std::filesystem::path& path);

/// Pixel probability >= threshold is traversable.
GroundTruthMask load_gt_mask(const std::filesystem::path& path, double threshold = 0.5);

GroundTruthMask threshold_mask(const ProbGrid& grid, double threshold = 0.5);

/// Throws MapIoError when the two grids disagree on dimensions.
void require_same_shape(const GridShape& map, const GridShape& mask, const std::string& what);

/// 8-bit binary PGM (P5); probabilities are rounded to the nearest level.
void save_pgm(const ProbGrid& grid, const std::filesystem::path& path);
void save_pgm(const GroundTruthMask& mask, const std::filesystem::path& path);
/// Full-precision CSV, one grid row per line.
void save_csv(const ProbGrid& grid, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Resampling (area-weighted box filter).

ProbGrid resample(const ProbGrid& grid, int out_w, int out_h);
/// Resamples the {0,1} image as reals and re-thresholds at 0.5.
GroundTruthMask resample(const GroundTruthMask& mask, int out_w, int out_h);

}  // namespace urplan
