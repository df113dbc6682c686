#include "urplan/simulator.hpp"

#include <stdexcept>

#include "urplan/search_core.hpp"

namespace urplan {

RobotSession::RobotSession(ProbGrid known, const GroundTruthMask& gt, Cell start, int scan_radius)
    : known_(std::move(known)), gt_(gt), position_(start), radius_(scan_radius) {
  if (known_.shape() != gt_.shape()) {
    throw std::invalid_argument("known grid and ground truth differ in size");
  }
  if (!gt_.in_bounds(start)) throw std::invalid_argument("start out of bounds");
  if (!gt_.traversable(start)) throw std::invalid_argument("start is blocked in ground truth");
  if (radius_ < 1) throw std::invalid_argument("scan radius must be >= 1");
  trajectory_.push_back(start);
}

std::vector<Cell> RobotSession::sense() {
  return reveal(known_, scan_visible(position_, radius_, gt_));
}

RobotSession::MoveOutcome RobotSession::try_move(Cell next) {
  if (!known_.in_bounds(next) || !adjacent8(position_, next)) {
    throw std::logic_error("illegal move " + to_string(position_) + " -> " + to_string(next));
  }
  if (known_.at(next) == 0.0) {
    throw std::logic_error("attempted to enter revealed-blocked cell " + to_string(next));
  }
  MoveOutcome out;
  if (!gt_.traversable(next)) {
    out.changed = reveal(known_, {{next, Label::Blocked}});
    return out;
  }
  position_ = next;
  trajectory_.push_back(next);
  out.moved = true;
  return out;
}

}  // namespace urplan
