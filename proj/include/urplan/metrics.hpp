// Path quality metrics and the per-method aggregation with failure penalty.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "urplan/grid.hpp"

namespace urplan {

/// Euclidean length of `path` over euclid(start, goal). Throws
/// std::invalid_argument for an empty path or start == goal.
double norm_path_length(const std::vector<Cell>& path, Cell start, Cell goal);

/// Percentage of path cells that are traversable in ground truth.
double path_accuracy(const std::vector<Cell>& path, const GroundTruthMask& gt);

struct Metrics {
  double norm_path_length = 0.0;  // meaningful only when success
  double path_accuracy = 0.0;     // meaningful only when success
  bool success = false;
  std::size_t nodes_expanded = 0;
};

struct RunRecord {
  std::string scenario;
  std::string method;
  Metrics metrics;
  double penalized_length = 0.0;  // filled in by aggregate()
};

struct MethodSummary {
  std::string method;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double mean_norm_path_length = 0.0;  // after failure penalty
  double mean_path_accuracy = 0.0;     // successful plans only
  double mean_path_accuracy_all = 0.0; // failed plans count as 0%
  double success_rate = 0.0;           // percent
  double mean_nodes_expanded = 0.0;    // over all runs
};

struct BenchReport {
  std::vector<RunRecord> runs;  // sorted by (scenario, method rank)
  std::vector<MethodSummary> methods;
  std::vector<std::string> dropped_scenarios;  // no method succeeded
};

/// Replaces each failed run's length with the largest length any method
/// achieved on that scenario, then averages per method. Scenarios where every
/// method failed are dropped. The result does not depend on input order.
BenchReport aggregate(std::vector<RunRecord> runs);

/// Display order: the classical baselines first, then the proposed methods;
/// unknown names sort alphabetically after.
int method_rank(const std::string& method);

}  // namespace urplan
