#include "urplan/synthetic.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>
#include <vector>

#include "urplan/search_core.hpp"

namespace urplan {

std::string to_string(MapStyle style) {
  switch (style) {
    case MapStyle::Maze:
      return "maze";
    case MapStyle::Corridors:
      return "corridors";
    case MapStyle::Blobs:
      return "blobs";
  }
  return "unknown";
}

MapStyle parse_map_style(const std::string& name) {
  if (name == "maze") return MapStyle::Maze;
  if (name == "corridors") return MapStyle::Corridors;
  if (name == "blobs") return MapStyle::Blobs;
  throw std::invalid_argument("unknown map style '" + name + "' (maze, corridors, blobs)");
}

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

void fill_rect(GroundTruthMask& gt, int r0, int c0, int r1, int c1) {
  for (int r = std::max(0, r0); r <= std::min(gt.height() - 1, r1); ++r) {
    for (int c = std::max(0, c0); c <= std::min(gt.width() - 1, c1); ++c) {
      gt.set({r, c}, Label::Traversable);
    }
  }
}

// Passage widths: narrow ones are what thresholding tends to lose.
int passage_width(Rng& rng) {
  const int roll = uniform_int(rng, 0, 99);
  return roll < 40 ? 1 : (roll < 70 ? 2 : 3);
}

// Rooms of kRoom x kRoom cells on a lattice, separated by kWall-thick walls.
// Doors are carved by a randomized depth-first search plus a few extra
// openings so the maze has loops.
GroundTruthMask make_maze(Rng& rng, int width, int height) {
  constexpr int kRoom = 3;
  constexpr int kWall = 2;
  constexpr int kPitch = kRoom + kWall;
  GroundTruthMask gt(width, height, Label::Blocked);
  const int nx = std::max(1, (width - kWall) / kPitch);
  const int ny = std::max(1, (height - kWall) / kPitch);
  auto origin = [&](int i, int j) { return Cell{kWall + i * kPitch, kWall + j * kPitch}; };
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      const Cell o = origin(i, j);
      fill_rect(gt, o.row, o.col, o.row + kRoom - 1, o.col + kRoom - 1);
    }
  }

  auto carve_door = [&](int i, int j, bool down) {
    const Cell o = origin(i, j);
    const int w = passage_width(rng);
    const int off = uniform_int(rng, 0, kRoom - w);
    if (down) {
      fill_rect(gt, o.row + kRoom, o.col + off, o.row + kRoom + kWall - 1, o.col + off + w - 1);
    } else {
      fill_rect(gt, o.row + off, o.col + kRoom, o.row + off + w - 1, o.col + kRoom + kWall - 1);
    }
  };

  std::vector<char> visited(static_cast<std::size_t>(nx * ny), 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  visited[0] = 1;
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    std::vector<std::pair<int, int>> options;
    for (const auto& [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
      const int ni = i + di;
      const int nj = j + dj;
      if (ni < 0 || nj < 0 || ni >= ny || nj >= nx) continue;
      if (!visited[static_cast<std::size_t>(ni * nx + nj)]) options.emplace_back(di, dj);
    }
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const auto [di, dj] = options[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(options.size()) - 1))];
    const int ni = i + di;
    const int nj = j + dj;
    // Doors are carved from the upper/left room of the pair.
    carve_door(std::min(i, ni), std::min(j, nj), di != 0);
    visited[static_cast<std::size_t>(ni * nx + nj)] = 1;
    stack.emplace_back(ni, nj);
  }
  // Extra openings for loops.
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      if (i + 1 < ny && uniform_int(rng, 0, 99) < 12) carve_door(i, j, true);
      if (j + 1 < nx && uniform_int(rng, 0, 99) < 12) carve_door(i, j, false);
    }
  }
  return gt;
}

// Waypoint rooms joined by axis-aligned L-shaped corridors of varying width.
GroundTruthMask make_corridors(Rng& rng, int width, int height) {
  GroundTruthMask gt(width, height, Label::Blocked);
  const int count = std::max(4, width * height / 700);
  const int margin = 2;
  std::vector<Cell> pts;
  for (int k = 0; k < count; ++k) {
    pts.push_back({uniform_int(rng, margin, std::max(margin, height - 1 - margin - 2)),
                   uniform_int(rng, margin, std::max(margin, width - 1 - margin - 2))});
  }
  for (const Cell p : pts) {
    const int s = uniform_int(rng, 2, 4);
    fill_rect(gt, p.row, p.col, p.row + s - 1, p.col + s - 1);
  }

  auto corridor = [&](Cell a, Cell b) {
    const int w = passage_width(rng);
    const bool horizontal_first = uniform_int(rng, 0, 1) == 0;
    const Cell bend = horizontal_first ? Cell{a.row, b.col} : Cell{b.row, a.col};
    auto segment = [&](Cell p, Cell q) {
      fill_rect(gt, std::min(p.row, q.row), std::min(p.col, q.col), std::max(p.row, q.row) + w - 1,
                std::max(p.col, q.col) + w - 1);
    };
    segment(a, bend);
    segment(bend, b);
  };

  // Each waypoint joins its nearest predecessor (a spanning tree), plus a
  // few second-nearest links for alternative routes.
  for (std::size_t k = 1; k < pts.size(); ++k) {
    std::vector<std::pair<double, std::size_t>> by_dist;
    for (std::size_t m = 0; m < k; ++m) by_dist.emplace_back(euclid(pts[k], pts[m]), m);
    std::sort(by_dist.begin(), by_dist.end());
    corridor(pts[k], pts[by_dist[0].second]);
    if (by_dist.size() > 1 && uniform_int(rng, 0, 99) < 35) corridor(pts[k], pts[by_dist[1].second]);
  }
  return gt;
}

GroundTruthMask make_blobs(Rng& rng, int width, int height) {
  GroundTruthMask gt(width, height, Label::Traversable);
  const int count = std::max(3, width * height / 250);
  for (int k = 0; k < count; ++k) {
    const Cell c{uniform_int(rng, 0, height - 1), uniform_int(rng, 0, width - 1)};
    const int rad = uniform_int(rng, 2, std::max(2, std::min(width, height) / 12));
    for (int r = c.row - rad; r <= c.row + rad; ++r) {
      for (int q = c.col - rad; q <= c.col + rad; ++q) {
        const Cell x{r, q};
        if (gt.in_bounds(x) && euclid(x, c) <= rad) gt.set(x, Label::Blocked);
      }
    }
  }
  return gt;
}

std::vector<int> components(const GroundTruthMask& gt, int& largest) {
  const GridShape& shape = gt.shape();
  std::vector<int> comp(shape.size(), -1);
  std::vector<int> sizes;
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (comp[i] >= 0 || !gt.traversable(shape.cell(i))) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    queue.assign(1, i);
    comp[i] = id;
    while (!queue.empty()) {
      const std::size_t u = queue.back();
      queue.pop_back();
      ++sizes.back();
      for (const auto& nb : neighbors(shape.cell(u), shape)) {
        const std::size_t v = shape.index(nb.cell);
        if (comp[v] < 0 && gt.traversable(nb.cell)) {
          comp[v] = id;
          queue.push_back(v);
        }
      }
    }
  }
  largest = -1;
  int best = 0;
  for (int k = 0; k < static_cast<int>(sizes.size()); ++k) {
    if (sizes[static_cast<std::size_t>(k)] > best) {
      best = sizes[static_cast<std::size_t>(k)];
      largest = k;
    }
  }
  return comp;
}

}  // namespace

SyntheticMap gen_synthetic(std::uint64_t seed, int width, int height, MapStyle style, double noise) {
  if (!(noise >= 0.0 && noise <= 0.5)) throw std::invalid_argument("noise must lie in [0, 0.5]");
  if (width < 8 || height < 8) throw std::invalid_argument("synthetic maps must be at least 8x8");
  Rng rng(seed);
  GroundTruthMask gt;
  switch (style) {
    case MapStyle::Maze:
      gt = make_maze(rng, width, height);
      break;
    case MapStyle::Corridors:
      gt = make_corridors(rng, width, height);
      break;
    case MapStyle::Blobs:
      gt = make_blobs(rng, width, height);
      break;
  }

  std::uniform_real_distribution<double> jitter(-noise, noise);
  std::vector<double> raw(gt.labels().size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = (gt.labels()[i] == Label::Traversable ? 1.0 : 0.0) + (noise > 0.0 ? jitter(rng) : 0.0);
  }

  // 3x3 mean over the in-bounds neighborhood.
  const GridShape& shape = gt.shape();
  std::vector<double> prob(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Cell c = shape.cell(i);
    double sum = raw[i];
    int n = 1;
    for (const auto& nb : neighbors(c, shape)) {
      sum += raw[shape.index(nb.cell)];
      ++n;
    }
    prob[i] = std::clamp(sum / n, kProbabilityFloor, 1.0);
  }
  return {ProbGrid(width, height, std::move(prob)), std::move(gt)};
}

std::optional<std::pair<Cell, Cell>> pick_endpoints(const GroundTruthMask& gt, std::uint64_t seed) {
  int largest = -1;
  const std::vector<int> comp = components(gt, largest);
  if (largest < 0) return std::nullopt;
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    if (comp[i] == largest) cells.push_back(gt.shape().cell(i));
  }
  if (cells.size() < 2) return std::nullopt;

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  constexpr int kCandidates = 48;
  std::vector<Cell> cand;
  for (int k = 0; k < kCandidates; ++k) {
    cand.push_back(cells[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(cells.size()) - 1))]);
  }
  std::pair<Cell, Cell> best{cand[0], cand[1]};
  double best_d = -1.0;
  for (std::size_t a = 0; a < cand.size(); ++a) {
    for (std::size_t b = a + 1; b < cand.size(); ++b) {
      const double d = euclid(cand[a], cand[b]);
      if (d > best_d) {
        best_d = d;
        best = {cand[a], cand[b]};
      }
    }
  }
  if (best.first == best.second) return std::nullopt;
  return best;
}

}  // namespace urplan
