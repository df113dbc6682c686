// Uncertainty-aware anytime A*: ARA*-style repeated weighted searches whose
// priority subtracts a bonus for high traversal probability.
#pragma once

#include <cstddef>
#include <vector>

#include "urplan/search_core.hpp"

namespace urplan {

/// g + eps * (euclid(s, goal) - alpha * M(s)). Not clamped: the result may
/// be below g when alpha * M(s) exceeds the remaining distance.
double ura_f_value(double g, Cell s, Cell goal, const ProbGrid& grid, double eps, double alpha);

enum class SearchDirection {
  Forward,   // g is cost-from-start
  Backward,  // g is cost-to-goal (the layout an incremental replanner expects)
};

/// One ImprovePath pass of the anytime schedule.
struct UraPass {
  double epsilon = 1.0;
  std::size_t expansions = 0;
  double incumbent_cost = kInf;  // best re-priced solution so far
};

class UraPlanner {
 public:
  /// Throws std::invalid_argument for out-of-bounds endpoints and ConfigError
  /// for invalid params.
  UraPlanner(const ProbGrid& grid, Cell start, Cell goal, const PlannerParams& params,
             SearchDirection direction = SearchDirection::Forward);

  /// Runs the whole epsilon schedule, ending with a pass at exactly 1.
  PlanResult run();

  /// Expands until the target's f-value is no larger than the OPEN minimum.
  /// Returns the number of expansions.
  std::size_t improve_path();

  /// Lowers epsilon, moves INCONS into OPEN, re-keys OPEN and empties CLOSED.
  void next_pass(double epsilon);

  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] const std::vector<UraPass>& passes() const noexcept { return passes_; }
  [[nodiscard]] const std::vector<double>& g_values() const noexcept { return g_; }
  [[nodiscard]] std::size_t total_expansions() const noexcept { return expansions_; }

  /// Best solution found so far (start -> goal order for both directions).
  [[nodiscard]] PlanResult incumbent() const;

 private:
  [[nodiscard]] SearchKey key(std::size_t idx) const;
  [[nodiscard]] double edge(std::size_t from, std::size_t to, double step) const;
  [[nodiscard]] std::vector<Cell> extract_path() const;
  void record_pass(std::size_t expansions);

  const ProbGrid& grid_;
  GridShape shape_;
  Cell start_;
  Cell goal_;
  PlannerParams params_;
  SearchDirection direction_;
  CostModel cost_;

  std::size_t source_ = 0;  // where g = 0
  std::size_t target_ = 0;  // where the heuristic points
  Cell target_cell_;

  double epsilon_ = 1.0;
  std::vector<double> g_;
  std::vector<std::size_t> parent_;
  std::vector<char> closed_;
  std::vector<char> in_incons_;
  std::vector<std::size_t> incons_;
  IndexedHeap open_;

  std::vector<UraPass> passes_;
  std::vector<Cell> best_path_;
  double best_cost_ = kInf;
  std::size_t expansions_ = 0;
};

/// Full anytime plan from start to goal.
PlanResult ura_star(const ProbGrid& grid, Cell start, Cell goal, const PlannerParams& params);

}  // namespace urplan
