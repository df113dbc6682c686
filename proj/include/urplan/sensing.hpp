// Simulated range sensing over a ground-truth mask.
#pragma once

#include <vector>

#include "urplan/grid.hpp"

namespace urplan {

/// Integer Bresenham line from a to b inclusive. The result is symmetric:
/// bresenham_line(a, b) is bresenham_line(b, a) reversed, cell for cell.
std::vector<Cell> bresenham_line(Cell a, Cell b);

struct Sighting {
  Cell cell;
  Label label = Label::Traversable;

  friend bool operator==(const Sighting&, const Sighting&) = default;
};

/// Cells visible from `center` within Euclidean `radius`, sorted by (row, col).
///
/// One ray is cast to every boundary cell of the (2r+1)x(2r+1) square and
/// clipped to the disk. A ray reveals cells up to and including the first
/// blocked one. Throws std::invalid_argument for radius < 1 or an
/// out-of-bounds center.
std::vector<Sighting> scan_visible(Cell center, int radius, const GroundTruthMask& gt);

/// Writes the sighted labels into `known` (traversable -> 1.0, blocked ->
/// 0.0) and returns the cells whose value actually changed, sorted.
std::vector<Cell> reveal(ProbGrid& known, const std::vector<Sighting>& visible);

}  // namespace urplan
