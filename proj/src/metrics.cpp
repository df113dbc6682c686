#include "urplan/metrics.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string_view>

#include "urplan/search_core.hpp"

namespace urplan {

double norm_path_length(const std::vector<Cell>& path, Cell start, Cell goal) {
  if (path.empty()) throw std::invalid_argument("norm_path_length: empty path");
  const double straight = euclid(start, goal);
  if (straight == 0.0) throw std::invalid_argument("norm_path_length: start == goal");
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += euclid(path[i - 1], path[i]);
  return len / straight;
}

double path_accuracy(const std::vector<Cell>& path, const GroundTruthMask& gt) {
  if (path.empty()) throw std::invalid_argument("path_accuracy: empty path");
  const auto ok = std::count_if(path.begin(), path.end(), [&](Cell c) { return gt.traversable(c); });
  return 100.0 * static_cast<double>(ok) / static_cast<double>(path.size());
}

int method_rank(const std::string& method) {
  static constexpr std::array<std::string_view, 7> kOrder{"astar", "astar30", "rrt", "ura",
                                                          "rra",   "dlite",   "urd"};
  const auto it = std::find(kOrder.begin(), kOrder.end(), method);
  return it == kOrder.end() ? static_cast<int>(kOrder.size()) : static_cast<int>(it - kOrder.begin());
}

namespace {

bool record_less(const RunRecord& a, const RunRecord& b) {
  if (a.scenario != b.scenario) return a.scenario < b.scenario;
  const int ra = method_rank(a.method);
  const int rb = method_rank(b.method);
  if (ra != rb) return ra < rb;
  return a.method < b.method;
}

}  // namespace

BenchReport aggregate(std::vector<RunRecord> runs) {
  std::sort(runs.begin(), runs.end(), record_less);
  BenchReport report;

  std::map<std::string, double> penalty;  // per scenario: max successful length
  for (const auto& r : runs) {
    if (!r.metrics.success) continue;
    auto [it, inserted] = penalty.try_emplace(r.scenario, r.metrics.norm_path_length);
    if (!inserted) it->second = std::max(it->second, r.metrics.norm_path_length);
  }

  for (auto& r : runs) {
    const auto it = penalty.find(r.scenario);
    if (it == penalty.end()) {
      if (report.dropped_scenarios.empty() || report.dropped_scenarios.back() != r.scenario) {
        report.dropped_scenarios.push_back(r.scenario);
      }
      continue;
    }
    r.penalized_length = r.metrics.success ? r.metrics.norm_path_length : it->second;
    report.runs.push_back(r);
  }

  std::vector<std::string> names;
  for (const auto& r : report.runs) {
    if (std::find(names.begin(), names.end(), r.method) == names.end()) names.push_back(r.method);
  }
  std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
    const int ra = method_rank(a);
    const int rb = method_rank(b);
    return ra != rb ? ra < rb : a < b;
  });

  for (const auto& name : names) {
    MethodSummary s;
    s.method = name;
    double len = 0.0, acc = 0.0, nodes = 0.0;
    for (const auto& r : report.runs) {
      if (r.method != name) continue;
      ++s.runs;
      len += r.penalized_length;
      nodes += static_cast<double>(r.metrics.nodes_expanded);
      if (r.metrics.success) {
        ++s.successes;
        acc += r.metrics.path_accuracy;
      }
    }
    const auto n = static_cast<double>(s.runs);
    s.mean_norm_path_length = len / n;
    s.mean_nodes_expanded = nodes / n;
    s.success_rate = 100.0 * static_cast<double>(s.successes) / n;
    s.mean_path_accuracy = s.successes ? acc / static_cast<double>(s.successes) : 0.0;
    s.mean_path_accuracy_all = acc / n;
    report.methods.push_back(s);
  }
  return report;
}

}  // namespace urplan
