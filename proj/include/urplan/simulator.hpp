// Simulated robot: owns the planner's known grid and reveals ground truth
// around itself as it moves. Every navigator drives the world through this
// class, so they all see identical sensing.
#pragma once

#include <vector>

#include "urplan/grid.hpp"
#include "urplan/sensing.hpp"

namespace urplan {

class RobotSession {
 public:
  /// Throws std::invalid_argument on mismatched dims or an out-of-bounds or
  /// GT-blocked start.
  RobotSession(ProbGrid known, const GroundTruthMask& gt, Cell start, int scan_radius);

  /// Scans from the current position and writes what was seen into the
  /// known grid. Returns the cells whose known value changed.
  std::vector<Cell> sense();

  struct MoveOutcome {
    bool moved = false;
    std::vector<Cell> changed;  // non-empty when a bump revealed a block
  };

  /// Steps to an 8-adjacent cell. Entering a cell already known to be blocked
  /// is a logic error and throws. Entering an unrevealed cell that is blocked
  /// in ground truth is a bump: the robot stays put and the cell is revealed.
  MoveOutcome try_move(Cell next);

  [[nodiscard]] Cell position() const noexcept { return position_; }
  [[nodiscard]] const ProbGrid& known() const noexcept { return known_; }
  [[nodiscard]] const GroundTruthMask& ground_truth() const noexcept { return gt_; }
  [[nodiscard]] const std::vector<Cell>& trajectory() const noexcept { return trajectory_; }
  [[nodiscard]] int scan_radius() const noexcept { return radius_; }

 private:
  ProbGrid known_;
  const GroundTruthMask& gt_;
  Cell position_;
  int radius_;
  std::vector<Cell> trajectory_;
};

}  // namespace urplan
