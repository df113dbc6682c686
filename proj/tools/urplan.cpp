// urplan: plan, replan, bench, gen and render from the command line.
// Exit codes: 0 success, 1 planning failure, 2 I/O or configuration error.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "urplan/baselines.hpp"
#include "urplan/bench.hpp"
#include "urplan/render.hpp"
#include "urplan/scenario.hpp"
#include "urplan/synthetic.hpp"
#include "urplan/ura.hpp"
#include "urplan/urd.hpp"

namespace {

using nlohmann::json;
using namespace urplan;

constexpr int kExitOk = 0;
constexpr int kExitPlanFailed = 1;
constexpr int kExitConfig = 2;

Cell parse_cell_arg(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used = 0;
    const int r = std::stoi(text.substr(0, comma), &used);
    const std::string rest = text.substr(comma + 1);
    std::size_t used2 = 0;
    const int c = std::stoi(rest, &used2);
    if (used != comma || used2 != rest.size()) throw std::invalid_argument("trailing text");
    return {r, c};
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("--{} expects r,c (got '{}')", what, text));
  }
}

json cell_json(Cell c) { return json::array({c.row, c.col}); }

json path_json(const std::vector<Cell>& path) {
  json out = json::array();
  for (const Cell c : path) out.push_back(cell_json(c));
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<Cell> read_path_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw MapIoError("cannot open " + file);
  json j;
  try {
    j = json::parse(in);
    const json& arr = j.is_object() ? j.at("path") : j;
    std::vector<Cell> path;
    for (const auto& e : arr) path.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return path;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: expected [[r,c],...] or {{\"path\": [...]}}: {}", file, e.what()));
  }
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw MapIoError("cannot write " + file);
  out << text;
  if (!out) throw MapIoError("write failed: " + file);
}

// Options shared by plan and replan.
struct MapArgs {
  std::string map;
  std::string start;
  std::string goal;
  std::string params_file;
  int grid = -1;  // -1 keeps the parameter default; 0 = native size
};

void add_map_args(CLI::App* cmd, MapArgs& a) {
  cmd->add_option("--map", a.map, "Probability map (PGM, PNG or CSV)")->required();
  cmd->add_option("--start", a.start, "Start cell as row,col in map coordinates")->required();
  cmd->add_option("--goal", a.goal, "Goal cell as row,col in map coordinates")->required();
  cmd->add_option("--params", a.params_file, "JSON file with planner parameters");
  cmd->add_option("--grid", a.grid, "Planning grid side length (0 keeps the map's size)");
}

struct Prepared {
  ProbGrid raw;
  ProbGrid prior;
  Cell start;
  Cell goal;
  PlannerParams params;
};

Prepared prepare(const MapArgs& a, std::optional<int> radius) {
  PlannerParams params;
  if (!a.params_file.empty()) {
    std::ifstream in(a.params_file);
    if (!in) throw MapIoError("cannot open " + a.params_file);
    params = parse_params(std::string(std::istreambuf_iterator<char>(in), {}));
  }
  if (a.grid >= 0) params.grid_w = params.grid_h = a.grid;
  if (radius) params.scan_radius = *radius;
  params.validate();
  Prepared p{load_prob_grid(a.map), {}, {}, {}, params};
  const Cell start = parse_cell_arg(a.start, "start");
  const Cell goal = parse_cell_arg(a.goal, "goal");
  for (const Cell c : {start, goal}) {
    if (!p.raw.in_bounds(c)) throw ConfigError(fmt::format("cell {} lies outside the map", to_string(c)));
  }
  p.prior = prepare_prior(p.raw, params);
  p.start = scale_cell(start, p.raw.shape(), p.prior.shape());
  p.goal = scale_cell(goal, p.raw.shape(), p.prior.shape());
  return p;
}

int cmd_plan(const MapArgs& a, const std::string& algo, std::uint64_t seed, const std::string& out,
             const std::string& image) {
  const Prepared p = prepare(a, std::nullopt);
  PlanResult r;
  if (algo == "ura") {
    r = ura_star(p.prior, p.start, p.goal, p.params);
  } else if (algo == "astar" || algo == "astar30") {
    r = a_star(threshold_map(p.prior, algo == "astar" ? p.params.threshold : 0.3), p.start, p.goal);
  } else {
    const BinaryMap map = threshold_map(p.prior, p.params.threshold);
    if (map.free(p.start) && map.free(p.goal)) {
      RrtParams rp;
      rp.seed = seed;
      r = rrt_star(map, p.start, p.goal, rp);
    }
  }
  const json doc{{"algo", algo},
                 {"success", r.succeeded},
                 {"cost", finite_or_null(r.cost)},
                 {"nodes_expanded", r.nodes_expanded},
                 {"grid", {p.prior.width(), p.prior.height()}},
                 {"start", cell_json(p.start)},
                 {"goal", cell_json(p.goal)},
                 {"path", path_json(r.path)}};
  if (!out.empty()) write_text(out, doc.dump() + "\n");
  if (!image.empty()) save_image(render_overlay(p.prior, {r.path}, {p.start, p.goal}), image);
  if (r.succeeded) {
    fmt::print("{}: cost {:.4f}, {} cells, {} nodes expanded\n", algo, r.cost, r.path.size(), r.nodes_expanded);
    return kExitOk;
  }
  fmt::print("{}: no path found ({} nodes expanded)\n", algo, r.nodes_expanded);
  return kExitPlanFailed;
}

int cmd_replan(const MapArgs& a, const std::string& gt_file, const std::string& algo,
               std::optional<int> radius, const std::string& heuristic, const std::string& trace_file,
               const std::string& image) {
  const Prepared p = prepare(a, radius);
  const GroundTruthMask mask = load_gt_mask(gt_file);
  require_same_shape(p.raw.shape(), mask.shape(), "ground-truth mask");
  const GroundTruthMask gt = resample(mask, p.prior.width(), p.prior.height());

  std::ofstream trace;
  if (!trace_file.empty()) {
    trace.open(trace_file);
    if (!trace) throw MapIoError("cannot write " + trace_file);
  }
  NavObserver observer;
  if (trace.is_open()) {
    observer = [&trace](const NavStep& s) {
      trace << json{{"step", s.step},           {"current", cell_json(s.current)},
                    {"route_cost", finite_or_null(s.route_cost)},
                    {"changed", s.changed},     {"expansions", s.expansions},
                    {"gamma", s.gamma}}.dump()
            << "\n";
    };
  }

  NavResult r;
  if (algo == "urd") {
    NavOptions options;
    options.heuristic = heuristic == "urd" ? HeuristicKind::Urd : HeuristicKind::Euclid;
    options.observer = observer;
    r = urd_navigate(p.prior, gt, p.start, p.goal, p.params, options);
  } else if (algo == "dlite") {
    r = d_star_lite_navigate(p.prior, gt, p.start, p.goal, p.params, observer);
  } else {
    r = rra_star_navigate(p.prior, gt, p.start, p.goal, p.params, observer);
  }
  if (trace.is_open() && !trace) throw MapIoError("write failed: " + trace_file);
  if (!image.empty()) save_image(render_overlay(p.prior, {r.traversed_path}, {p.start, p.goal}), image);

  fmt::print("{}: {} after {} steps, {} replans, {} resets, {} replanning expansions ({} at init)\n", algo,
             to_string(r.outcome), r.steps, r.replans, r.resets, r.nodes_expanded, r.init_expansions);
  return r.outcome == NavOutcome::Reached ? kExitOk : kExitPlanFailed;
}

int cmd_bench(const std::string& manifest, const std::string& out, BenchOptions options) {
  const std::vector<Scenario> scenarios = load_manifest(manifest);
  const BenchOutput result = run_bench(scenarios, options);
  std::ofstream csv(out);
  if (!csv) throw MapIoError("cannot write " + out);
  write_report_csv(result, csv);
  if (!csv) throw MapIoError("write failed: " + out);
  fmt::print("{}", format_report_table(result));
  return kExitOk;
}

int cmd_gen(std::uint64_t seed, const std::string& style, double noise, int width, int height,
            const std::string& out) {
  Scenario s;
  try {
    s = make_synthetic_scenario(seed, width, height, parse_map_style(style), noise);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  write_scenario_dir(s, out);
  fmt::print("wrote {}/scenario.json: {}x{}, start {}, goal {}\n", out, s.prior.width(), s.prior.height(),
             to_string(s.start), to_string(s.goal));
  return kExitOk;
}

int cmd_render(const std::string& map, const std::vector<std::string>& paths, const std::string& start,
               const std::string& goal, const std::string& out) {
  const ProbGrid grid = load_prob_grid(map);
  std::vector<std::vector<Cell>> cells;
  for (const auto& f : paths) cells.push_back(read_path_file(f));
  OverlayMarkers markers;
  if (!start.empty()) markers.start = parse_cell_arg(start, "start");
  if (!goal.empty()) markers.goal = parse_cell_arg(goal, "goal");
  // Default markers: the ends of the first path.
  if (!cells.empty() && !cells.front().empty()) {
    if (!markers.start) markers.start = cells.front().front();
    if (!markers.goal) markers.goal = cells.front().back();
  }
  try {
    save_image(render_overlay(grid, cells, markers), out);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning on probabilistic traversability maps"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();

  MapArgs plan_args;
  std::string plan_algo = "ura", plan_out, plan_image;
  auto* plan = app.add_subcommand("plan", "Single-shot planning on a probability map");
  add_map_args(plan, plan_args);
  plan->add_option("--algo", plan_algo)->check(CLI::IsMember({"ura", "astar", "astar30", "rrt"}))->capture_default_str();
  plan->add_option("--out", plan_out, "Write the result as JSON");
  plan->add_option("--image", plan_image, "Render the path (PNG or PPM)");
  plan->add_option("--seed", seed, "Seed for every random choice");

  MapArgs replan_args;
  std::string replan_gt, replan_algo = "urd", heuristic = "urd", trace_file, replan_image;
  std::optional<int> radius;
  auto* replan = app.add_subcommand("replan", "Navigate with sensing and incremental replanning");
  add_map_args(replan, replan_args);
  replan->add_option("--gt", replan_gt, "Ground-truth traversability mask")->required();
  replan->add_option("--algo", replan_algo)->check(CLI::IsMember({"urd", "dlite", "rra"}))->capture_default_str();
  replan->add_option("--radius", radius, "Sensing radius in cells");
  replan->add_option("--heuristic", heuristic, "Heuristic for urd")
      ->check(CLI::IsMember({"urd", "euclid-goal"}))
      ->capture_default_str();
  replan->add_option("--trace", trace_file, "Per-iteration JSON lines");
  replan->add_option("--image", replan_image, "Render the traversed path (PNG or PPM)");
  replan->add_option("--seed", seed, "Seed for every random choice");

  std::string manifest, bench_out = "report.csv";
  BenchOptions bench_options;
  auto* bench = app.add_subcommand("bench", "Run every method over a scenario suite");
  bench->add_option("--manifest", manifest, "Suite manifest (JSON)")->required();
  bench->add_option("--out", bench_out, "CSV report")->capture_default_str();
  bench->add_option("--threads", bench_options.threads, "Worker threads (0 = all cores)");
  bench->add_flag("--oracle", bench_options.oracle, "Also run the exact composite-cost search");
  bench->add_option("--rrt-iterations", bench_options.rrt.iterations)->capture_default_str();
  bench->add_option("--seed", seed, "Seed for every random choice");

  std::string style = "corridors", gen_out;
  double noise = 0.3;
  int width = 64, height = 64;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic scenario");
  gen->add_option("--style", style)->check(CLI::IsMember({"maze", "corridors", "blobs"}))->capture_default_str();
  gen->add_option("--noise", noise)->check(CLI::Range(0.0, 0.5))->capture_default_str();
  gen->add_option("--width", width)->check(CLI::Range(8, 100000))->capture_default_str();
  gen->add_option("--height", height)->check(CLI::Range(8, 100000))->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", seed, "Seed for every random choice");

  std::string render_map, render_out, render_start, render_goal;
  std::vector<std::string> render_paths;
  auto* render = app.add_subcommand("render", "Draw paths over a probability map");
  render->add_option("--map", render_map)->required();
  render->add_option("--path", render_paths, "Path JSON file (repeatable)");
  render->add_option("--start", render_start, "Start marker as row,col");
  render->add_option("--goal", render_goal, "Goal marker as row,col");
  render->add_option("--out", render_out, "PNG or PPM output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*plan) return cmd_plan(plan_args, plan_algo, seed, plan_out, plan_image);
    if (*replan) {
      return cmd_replan(replan_args, replan_gt, replan_algo, radius, heuristic, trace_file, replan_image);
    }
    if (*bench) {
      bench_options.seed = seed;
      return cmd_bench(manifest, bench_out, bench_options);
    }
    if (*gen) return cmd_gen(seed, style, noise, width, height, gen_out);
    if (*render) return cmd_render(render_map, render_paths, render_start, render_goal, render_out);
  } catch (const MapIoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
