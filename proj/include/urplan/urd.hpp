// Uncertainty-aware incremental replanning: a D*-lite engine whose tree is
// seeded by the anytime planner, driven through the simulated robot.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urplan/search_core.hpp"
#include "urplan/simulator.hpp"

namespace urplan {

/// Octile-shaped estimate scaled by how far `s_current` lies from `s_start`
/// relative to the whole start-goal span, capped by the Euclidean distance.
/// d_x runs over rows and d_y over columns.
double urd_heuristic(Cell s_start, Cell s_goal, Cell s_current, double gamma);

enum class HeuristicKind {
  Urd,     // urd_heuristic anchored at the robot
  Euclid,  // plain Euclidean distance to the robot
};

/// Incremental backward search (goal -> robot) with the D*-lite key modifier.
/// Edge costs are read from `known` on demand, so callers mutate the grid and
/// then report the changed cells through notify_changed().
class DStarLite {
 public:
  DStarLite(const ProbGrid& known, Cell start, Cell goal, CostModel cost, HeuristicKind heuristic,
            double gamma);

  /// Plain initialization: every g and rhs is infinite except rhs(goal) = 0.
  void initialize();

  /// Initialization from arbitrary upper bounds on cost-to-goal (e.g. a
  /// backward anytime search). rhs is derived from the seeded g-values and
  /// every locally inconsistent cell is queued.
  void seed(std::span<const double> cost_to_goal);

  /// Returns the number of expansions.
  std::size_t compute_shortest_path();

  /// Moves the search start (the robot). Key correction is applied lazily by
  /// the next notify_changed().
  void set_start(Cell start) { start_ = start; }

  /// Cells whose known probability changed since the last call.
  void notify_changed(const std::vector<Cell>& changed);

  /// argmin over successors of c(current, s') + g(s'); ties go to the lowest
  /// (row, col). Empty when every successor is unreachable.
  [[nodiscard]] std::optional<Cell> next_step() const;

  /// Greedy g-descent from the start; empty if it does not reach the goal.
  [[nodiscard]] std::vector<Cell> current_route() const;

  [[nodiscard]] double g(Cell c) const { return g_[shape_.index(c)]; }
  [[nodiscard]] double rhs(Cell c) const { return rhs_[shape_.index(c)]; }
  [[nodiscard]] double route_cost() const { return g(start_); }
  [[nodiscard]] double key_modifier() const noexcept { return k_m_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] Cell start() const noexcept { return start_; }
  [[nodiscard]] std::size_t queue_size() const noexcept { return open_.size(); }

 private:
  [[nodiscard]] double heuristic(Cell from, Cell to) const;
  [[nodiscard]] SearchKey calc_key(std::size_t idx) const;
  [[nodiscard]] double best_successor(std::size_t idx) const;
  void update_vertex(std::size_t idx);

  const ProbGrid* known_;
  GridShape shape_;
  Cell start_;
  Cell last_;
  Cell goal_;
  std::size_t goal_idx_;
  CostModel cost_;
  HeuristicKind heuristic_;
  double gamma_;
  double k_m_ = 0.0;
  std::vector<double> g_;
  std::vector<double> rhs_;
  IndexedHeap open_;
};

enum class NavOutcome { Reached, Fail };

struct NavResult {
  std::vector<Cell> traversed_path;
  std::size_t replans = 0;           // replanning events (reveals that changed costs, resets)
  std::size_t resets = 0;
  std::size_t nodes_expanded = 0;    // replanning expansions only
  std::size_t init_expansions = 0;   // tree initialization, reported separately
  std::size_t planner_calls = 0;     // full from-scratch searches (RRA*)
  std::size_t steps = 0;
  double final_gamma = 0.0;
  NavOutcome outcome = NavOutcome::Fail;
};

/// Per-iteration snapshot handed to observers after each shortest-path
/// computation.
struct NavStep {
  std::size_t step = 0;
  Cell current;
  double route_cost = kInf;
  std::size_t changed = 0;     // cells revealed with a new value before this step
  std::size_t expansions = 0;  // in this iteration
  double gamma = 0.0;
  const ProbGrid* known = nullptr;
};

using NavObserver = std::function<void(const NavStep&)>;

struct NavOptions {
  HeuristicKind heuristic = HeuristicKind::Urd;
  NavObserver observer;
  std::size_t max_steps = 0;  // 0 = 4 * grid cells
};

/// Detects a robot that is not making progress: an iteration is stalled when
/// the robot did not move or returned to the cell it left one iteration ago.
/// Fires once every `limit` consecutive stalled iterations.
class StallDetector {
 public:
  explicit StallDetector(int limit) : limit_(limit) {}
  bool observe(Cell position);
  void clear();

 private:
  int limit_;
  int count_ = 0;
  std::optional<Cell> prev_;
  std::optional<Cell> prev_prev_;
};

/// A seeded search tree and what seeding it cost.
struct UrdTree {
  DStarLite engine;
  std::size_t seed_expansions = 0;
};

/// Seeds a D*-lite tree with a backward anytime search from `goal` to
/// `current` on the known grid.
UrdTree build_urd_tree(const ProbGrid& known, Cell current, Cell goal, const PlannerParams& params,
                       double gamma, HeuristicKind heuristic = HeuristicKind::Urd);

struct UrdState {
  UrdTree tree;
  double gamma;
  std::size_t resets = 0;
};

/// Discards the tree, decays gamma and re-seeds from `current`.
void reset_tree(UrdState& state, const ProbGrid& known, Cell current, Cell goal,
                const PlannerParams& params, HeuristicKind heuristic = HeuristicKind::Urd);

namespace detail {

/// Knobs that distinguish the incremental navigators sharing one loop.
struct IncrementalConfig {
  CostModel cost;
  HeuristicKind heuristic = HeuristicKind::Urd;
  bool seed_with_ura = true;  // otherwise plain D*-lite initialization
  bool allow_resets = true;
};

NavResult navigate_incremental(const ProbGrid& prior, const GroundTruthMask& gt, Cell start,
                               Cell goal, const PlannerParams& params,
                               const IncrementalConfig& config, const NavOptions& options);

}  // namespace detail

/// Simulated navigation with URD*. `prior` is the planner's probability map
/// (already floored); `gt` supplies revealed labels.
NavResult urd_navigate(const ProbGrid& prior, const GroundTruthMask& gt, Cell start, Cell goal,
                       const PlannerParams& params, const NavOptions& options = {});

std::string to_string(NavOutcome outcome);

}  // namespace urplan
