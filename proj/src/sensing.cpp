#include "urplan/sensing.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace urplan {

namespace {

// Classic integer Bresenham, stepping along the major axis.
std::vector<Cell> raw_line(Cell a, Cell b) {
  const int dr = std::abs(b.row - a.row);
  const int dc = std::abs(b.col - a.col);
  const int sr = a.row < b.row ? 1 : -1;
  const int sc = a.col < b.col ? 1 : -1;
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(std::max(dr, dc)) + 1);

  Cell cur = a;
  if (dc >= dr) {
    int err = 2 * dr - dc;
    for (int i = 0; i <= dc; ++i) {
      out.push_back(cur);
      if (err > 0) {
        cur.row += sr;
        err -= 2 * dc;
      }
      err += 2 * dr;
      cur.col += sc;
    }
  } else {
    int err = 2 * dc - dr;
    for (int i = 0; i <= dr; ++i) {
      out.push_back(cur);
      if (err > 0) {
        cur.col += sc;
        err -= 2 * dr;
      }
      err += 2 * dc;
      cur.row += sr;
    }
  }
  return out;
}

}  // namespace

std::vector<Cell> bresenham_line(Cell a, Cell b) {
  // Always trace from the lexicographically smaller endpoint so tie-breaking
  // does not depend on argument order.
  if (b < a) {
    auto line = raw_line(b, a);
    std::reverse(line.begin(), line.end());
    return line;
  }
  return raw_line(a, b);
}

std::vector<Sighting> scan_visible(Cell center, int radius, const GroundTruthMask& gt) {
  if (radius < 1) throw std::invalid_argument("scan radius must be >= 1");
  if (!gt.in_bounds(center)) throw std::invalid_argument("scan center out of bounds");

  const GridShape& shape = gt.shape();
  std::vector<char> seen(shape.size(), 0);
  std::vector<Sighting> out;
  const long long r2 = static_cast<long long>(radius) * radius;

  auto cast = [&](Cell target) {
    for (const Cell c : bresenham_line(center, target)) {
      const long long dr = c.row - center.row;
      const long long dc = c.col - center.col;
      if (dr * dr + dc * dc > r2 || !shape.in_bounds(c)) break;
      const Label label = gt.at(c);
      auto& flag = seen[shape.index(c)];
      if (!flag) {
        flag = 1;
        out.push_back({c, label});
      }
      if (label == Label::Blocked) break;
    }
  };

  for (int d = -radius; d <= radius; ++d) {
    cast({center.row - radius, center.col + d});
    cast({center.row + radius, center.col + d});
    if (d != -radius && d != radius) {
      cast({center.row + d, center.col - radius});
      cast({center.row + d, center.col + radius});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Sighting& x, const Sighting& y) { return x.cell < y.cell; });
  return out;
}

std::vector<Cell> reveal(ProbGrid& known, const std::vector<Sighting>& visible) {
  std::vector<Cell> changed;
  for (const auto& [cell, label] : visible) {
    const double truth = label == Label::Traversable ? 1.0 : 0.0;
    if (known.at(cell) != truth) {
      known.set(cell, truth);
      changed.push_back(cell);
    }
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  return changed;
}

}  // namespace urplan
