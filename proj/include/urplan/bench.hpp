// Suite runner: every method on every scenario, then per-group aggregation.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "urplan/baselines.hpp"
#include "urplan/metrics.hpp"
#include "urplan/scenario.hpp"

namespace urplan {

/// Single-shot planners on the prior.
inline const std::vector<std::string> kPlanningMethods{"astar", "astar30", "rrt", "ura"};
/// Planners that navigate the simulated robot with sensing.
inline const std::vector<std::string> kReplanningMethods{"rra", "dlite", "urd"};

struct BenchOptions {
  std::uint64_t seed = 0;  // RRT* seed is derived from this and the scenario index
  unsigned threads = 0;    // 0 = hardware concurrency
  bool oracle = false;     // also run the exact composite-cost Dijkstra as "oracle"
  RrtParams rrt;
};

struct BenchOutput {
  BenchReport planning;
  BenchReport replanning;
};

/// Runs one method. Metrics fields other than nodes_expanded stay zero on
/// failure. Throws std::invalid_argument for unknown names and ConfigError
/// when the scenario lacks a ground-truth mask.
Metrics run_method(const Scenario& scenario, const std::string& method, std::uint64_t rrt_seed,
                   const BenchOptions& options);

/// Scenarios run in parallel; results are independent of thread count.
BenchOutput run_bench(const std::vector<Scenario>& scenarios, const BenchOptions& options);

/// One row per run, then one row per method summary.
void write_report_csv(const BenchOutput& out, std::ostream& os);
/// Aligned text tables for both groups.
std::string format_report_table(const BenchOutput& out);

}  // namespace urplan
