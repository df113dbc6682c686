#include "urplan/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "urplan/ura.hpp"
#include "urplan/urd.hpp"

namespace urplan {

namespace {

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

Metrics from_path(const std::vector<Cell>& path, bool ok, std::size_t nodes, const Scenario& s) {
  Metrics m;
  m.nodes_expanded = nodes;
  m.success = ok && !path.empty();
  if (m.success) {
    m.norm_path_length = norm_path_length(path, s.start, s.goal);
    m.path_accuracy = path_accuracy(path, *s.gt);
  }
  return m;
}

Metrics from_plan(const PlanResult& r, const Scenario& s) {
  return from_path(r.path, r.succeeded, r.nodes_expanded, s);
}

Metrics from_nav(const NavResult& r, const Scenario& s) {
  return from_path(r.traversed_path, r.outcome == NavOutcome::Reached, r.nodes_expanded, s);
}

bool in_group(const std::string& method, const std::vector<std::string>& group) {
  return std::find(group.begin(), group.end(), method) != group.end();
}

}  // namespace

Metrics run_method(const Scenario& s, const std::string& method, std::uint64_t rrt_seed,
                   const BenchOptions& options) {
  if (!s.gt) throw ConfigError("scenario '" + s.name + "' has no ground-truth mask");
  if (s.start == s.goal) throw ConfigError("scenario '" + s.name + "' has start == goal");
  const PlannerParams& p = s.params;
  if (method == "ura") return from_plan(ura_star(s.prior, s.start, s.goal, p), s);
  if (method == "astar") return from_plan(a_star(threshold_map(s.prior, p.threshold), s.start, s.goal), s);
  if (method == "astar30") return from_plan(a_star(threshold_map(s.prior, 0.3), s.start, s.goal), s);
  if (method == "rrt") {
    const BinaryMap map = threshold_map(s.prior, p.threshold);
    if (!map.free(s.start) || !map.free(s.goal)) return Metrics{};
    RrtParams rp = options.rrt;
    rp.seed = rrt_seed;
    return from_plan(rrt_star(map, s.start, s.goal, rp), s);
  }
  if (method == "oracle") return from_plan(dijkstra_oracle(s.prior, s.start, s.goal, p.w_trav), s);
  if (method == "urd") return from_nav(urd_navigate(s.prior, *s.gt, s.start, s.goal, p), s);
  if (method == "dlite") return from_nav(d_star_lite_navigate(s.prior, *s.gt, s.start, s.goal, p), s);
  if (method == "rra") return from_nav(rra_star_navigate(s.prior, *s.gt, s.start, s.goal, p), s);
  throw std::invalid_argument("unknown method '" + method + "'");
}

BenchOutput run_bench(const std::vector<Scenario>& scenarios, const BenchOptions& options) {
  std::vector<std::string> methods = kPlanningMethods;
  if (options.oracle) methods.push_back("oracle");
  methods.insert(methods.end(), kReplanningMethods.begin(), kReplanningMethods.end());

  // One job per (scenario, method); results land in a fixed slot.
  const std::size_t jobs = scenarios.size() * methods.size();
  std::vector<RunRecord> records(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      const Scenario& s = scenarios[k / methods.size()];
      const std::string& m = methods[k % methods.size()];
      try {
        records[k] = {s.name, m, run_method(s, m, options.seed ^ name_hash(s.name), options), 0.0};
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, jobs)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error) std::rethrow_exception(error);

  std::vector<RunRecord> planning, replanning;
  for (auto& r : records) {
    (in_group(r.method, kReplanningMethods) ? replanning : planning).push_back(std::move(r));
  }
  return {aggregate(std::move(planning)), aggregate(std::move(replanning))};
}

void write_report_csv(const BenchOutput& out, std::ostream& os) {
  os << "record,group,scenario,method,runs,successes,success_rate,norm_path_length,"
        "path_accuracy,path_accuracy_all,nodes_expanded\n";
  const std::pair<const char*, const BenchReport*> groups[] = {{"planning", &out.planning},
                                                              {"replanning", &out.replanning}};
  for (const auto& [group, report] : groups) {
    for (const auto& r : report->runs) {
      const auto& m = r.metrics;
      os << fmt::format("run,{},{},{},1,{},{:.1f},{:.6f},{},{:.4f},{}\n", group, r.scenario, r.method,
                        m.success ? 1 : 0, m.success ? 100.0 : 0.0, r.penalized_length,
                        m.success ? fmt::format("{:.4f}", m.path_accuracy) : std::string(),
                        m.success ? m.path_accuracy : 0.0, m.nodes_expanded);
    }
  }
  for (const auto& [group, report] : groups) {
    for (const auto& s : report->methods) {
      os << fmt::format("summary,{},*,{},{},{},{:.1f},{:.6f},{:.4f},{:.4f},{:.1f}\n", group, s.method,
                        s.runs, s.successes, s.success_rate, s.mean_norm_path_length,
                        s.mean_path_accuracy, s.mean_path_accuracy_all, s.mean_nodes_expanded);
    }
  }
}

std::string format_report_table(const BenchOutput& out) {
  std::string text;
  auto table = [&](const char* title, const BenchReport& report) {
    const auto scenarios = report.methods.empty() ? 0 : report.methods.front().runs;
    text += fmt::format("{} ({} scenarios)\n", title, scenarios);
    text += fmt::format("  {:<8} {:>12} {:>10} {:>12} {:>9} {:>14}\n", "method", "norm.length",
                        "acc.(%)", "acc.all(%)", "succ.(%)", "nodes");
    for (const auto& s : report.methods) {
      text += fmt::format("  {:<8} {:>12.3f} {:>10.2f} {:>12.2f} {:>9.1f} {:>14.1f}\n", s.method,
                          s.mean_norm_path_length, s.mean_path_accuracy, s.mean_path_accuracy_all,
                          s.success_rate, s.mean_nodes_expanded);
    }
    for (const auto& d : report.dropped_scenarios) {
      text += fmt::format("  dropped: {} (no method succeeded)\n", d);
    }
    text += "\n";
  };
  table("Planning on the prior", out.planning);
  table("Replanning with sensing", out.replanning);
  text +=
      "norm.length: failed runs count as the longest successful length on their scenario.\n"
      "acc.(%): successful runs only; acc.all(%) counts failed runs as 0%.\n"
      "nodes: planning expansions; replanning counts exclude tree initialization.\n";
  return text;
}

}  // namespace urplan
