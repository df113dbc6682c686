// Classical planners used as reference points: thresholded A*, RRT*,
// D*-lite and rapidly-replanning A*.
#pragma once

#include <cstdint>
#include <vector>

#include "urplan/search_core.hpp"
#include "urplan/urd.hpp"

namespace urplan {

class BinaryMap {
 public:
  BinaryMap() = default;
  BinaryMap(int width, int height, std::vector<std::uint8_t> free_cells);

  [[nodiscard]] int width() const noexcept { return shape_.width; }
  [[nodiscard]] int height() const noexcept { return shape_.height; }
  [[nodiscard]] const GridShape& shape() const noexcept { return shape_; }
  [[nodiscard]] bool in_bounds(Cell c) const noexcept { return shape_.in_bounds(c); }
  [[nodiscard]] bool free(Cell c) const { return free_[shape_.index(c)] != 0; }
  [[nodiscard]] std::size_t free_count() const;

  /// 1.0 for free cells, 0.0 for blocked ones.
  [[nodiscard]] ProbGrid as_grid() const;

 private:
  GridShape shape_;
  std::vector<std::uint8_t> free_;
};

/// Cell is free iff M(s) >= tau.
BinaryMap threshold_map(const ProbGrid& grid, double tau);

/// Optimal 8-connected geometric path over free cells, Euclidean heuristic.
PlanResult a_star(const BinaryMap& map, Cell start, Cell goal);

struct RrtParams {
  double step = 5.0;
  double radius = 50.0;
  int iterations = 10000;
  double goal_bias = 0.05;
  std::uint64_t seed = 0;
};

/// RRT* over free cells. Runs every iteration; nodes_expanded reports the
/// iteration count. The returned path is densified along each tree edge with
/// Bresenham cells. Throws std::invalid_argument for blocked endpoints.
PlanResult rrt_star(const BinaryMap& map, Cell start, Cell goal, const RrtParams& params);

/// D*-lite on the thresholded prior with the Euclidean heuristic, sharing the
/// simulator with urd_navigate.
NavResult d_star_lite_navigate(const ProbGrid& prior, const GroundTruthMask& gt, Cell start,
                               Cell goal, const PlannerParams& params,
                               const NavObserver& observer = {});

/// Follows an A* route on the thresholded known map and re-runs A* from the
/// robot whenever a reveal blocks a cell still ahead on the route.
NavResult rra_star_navigate(const ProbGrid& prior, const GroundTruthMask& gt, Cell start,
                            Cell goal, const PlannerParams& params,
                            const NavObserver& observer = {});

}  // namespace urplan
