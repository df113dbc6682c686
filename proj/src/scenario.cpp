#include "urplan/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace urplan {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MapIoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Cell parse_cell(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(fmt::format("'{}' must be [row, col]", what));
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

PlannerParams apply_params(const json& j, PlannerParams p) {
  if (!j.is_object()) throw ConfigError("params must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "epsilon_init") p.epsilon_init = value.get<double>();
      else if (key == "epsilon_step") p.epsilon_step = value.get<double>();
      else if (key == "alpha") p.alpha = value.get<double>();
      else if (key == "gamma_init") p.gamma_init = value.get<double>();
      else if (key == "gamma_decay") p.gamma_decay = value.get<double>();
      else if (key == "w_trav") p.w_trav = value.get<double>();
      else if (key == "scan_radius") p.scan_radius = value.get<int>();
      else if (key == "stall_limit") p.stall_limit = value.get<int>();
      else if (key == "grid_w") p.grid_w = value.get<int>();
      else if (key == "grid_h") p.grid_h = value.get<int>();
      else if (key == "threshold") p.threshold = value.get<double>();
      else throw ConfigError("unknown parameter '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad parameter value: {}", e.what()));
  }
  p.validate();
  return p;
}

json params_json(const PlannerParams& p) {
  return json{{"epsilon_init", p.epsilon_init}, {"epsilon_step", p.epsilon_step},
              {"alpha", p.alpha},               {"gamma_init", p.gamma_init},
              {"gamma_decay", p.gamma_decay},   {"w_trav", p.w_trav},
              {"scan_radius", p.scan_radius},   {"stall_limit", p.stall_limit},
              {"grid_w", p.grid_w},             {"grid_h", p.grid_h},
              {"threshold", p.threshold}};
}

void check_endpoint(const ProbGrid& grid, Cell c, const char* what) {
  if (!grid.in_bounds(c)) {
    throw ConfigError(fmt::format("{} {} lies outside the {}x{} map", what, to_string(c), grid.width(),
                                  grid.height()));
  }
}

Scenario synthetic_from_json(const json& entry) {
  try {
    const auto seed = entry.at("seed").get<std::uint64_t>();
    const auto style = parse_map_style(entry.value("style", std::string("corridors")));
    const double noise = entry.value("noise", 0.3);
    const int width = entry.value("width", 64);
    const int height = entry.value("height", 64);
    PlannerParams params;
    params.grid_w = 0;
    params.grid_h = 0;
    if (entry.contains("params")) params = apply_params(entry["params"], params);
    return make_synthetic_scenario(seed, width, height, style, noise, params);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad synthetic entry: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

PlannerParams parse_params(const std::string& json_text, PlannerParams base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("params: {}", e.what()));
  }
  return apply_params(j, base);
}

std::string params_to_json(const PlannerParams& params) { return params_json(params).dump(); }

Cell scale_cell(Cell c, const GridShape& from, const GridShape& to) {
  if (from.width == to.width && from.height == to.height) return c;
  auto scale = [](int v, int n_from, int n_to) {
    const int s = static_cast<int>((static_cast<double>(v) + 0.5) * n_to / n_from);
    return std::clamp(s, 0, n_to - 1);
  };
  return {scale(c.row, from.height, to.height), scale(c.col, from.width, to.width)};
}

ProbGrid prepare_prior(const ProbGrid& raw, const PlannerParams& params) {
  const int w = params.grid_w > 0 ? params.grid_w : raw.width();
  const int h = params.grid_h > 0 ? params.grid_h : raw.height();
  return resample(raw, w, h).with_floor(kProbabilityFloor);
}

Scenario load_scenario(const std::filesystem::path& path) {
  const json j = read_json(path);
  if (!j.is_object()) throw ConfigError(path.string() + ": scenario must be a JSON object");
  const auto base = path.parent_path();
  Scenario s;
  s.name = path.stem().string();
  try {
    s.params = j.contains("params") ? apply_params(j["params"], PlannerParams{}) : PlannerParams{};
    const ProbGrid raw = load_prob_grid(base / j.at("map").get<std::string>());
    const Cell start = parse_cell(j.at("start"), "start");
    const Cell goal = parse_cell(j.at("goal"), "goal");
    check_endpoint(raw, start, "start");
    check_endpoint(raw, goal, "goal");
    s.prior = prepare_prior(raw, s.params);
    s.start = scale_cell(start, raw.shape(), s.prior.shape());
    s.goal = scale_cell(goal, raw.shape(), s.prior.shape());
    if (j.contains("gt")) {
      const GroundTruthMask mask = load_gt_mask(base / j["gt"].get<std::string>());
      require_same_shape(raw.shape(), mask.shape(), "ground-truth mask");
      s.gt = resample(mask, s.prior.width(), s.prior.height());
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return s;
}

std::vector<Scenario> load_manifest(const std::filesystem::path& path) {
  const json j = read_json(path);
  const json& entries = j.is_array() ? j : j.value("scenarios", json::array());
  if (!entries.is_array() || entries.empty()) {
    throw ConfigError(path.string() + ": manifest lists no scenarios");
  }
  std::vector<Scenario> out;
  for (const auto& e : entries) {
    if (e.is_string()) {
      out.push_back(load_scenario(path.parent_path() / e.get<std::string>()));
    } else if (e.is_object() && e.contains("synthetic")) {
      out.push_back(synthetic_from_json(e["synthetic"]));
    } else {
      throw ConfigError(path.string() + ": manifest entries must be paths or {\"synthetic\": {...}}");
    }
  }
  return out;
}

Scenario make_synthetic_scenario(std::uint64_t seed, int width, int height, MapStyle style,
                                 double noise, PlannerParams params) {
  params.grid_w = 0;
  params.grid_h = 0;
  params.validate();
  SyntheticMap map = gen_synthetic(seed, width, height, style, noise);
  const auto ends = pick_endpoints(map.gt, seed);
  if (!ends) {
    throw ConfigError(fmt::format("synthetic {} map, seed {}, has no usable component", to_string(style), seed));
  }
  Scenario s;
  s.name = fmt::format("{}-{}x{}-n{}-s{}", to_string(style), width, height, noise, seed);
  s.prior = prepare_prior(map.prob, params);
  s.gt = resample(map.gt, s.prior.width(), s.prior.height());
  s.start = scale_cell(ends->first, map.prob.shape(), s.prior.shape());
  s.goal = scale_cell(ends->second, map.prob.shape(), s.prior.shape());
  s.params = params;
  return s;
}

void write_scenario_dir(const Scenario& scenario, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw MapIoError("cannot create " + dir.string() + ": " + ec.message());
  save_csv(scenario.prior, dir / "map.csv");
  save_pgm(scenario.prior, dir / "map.pgm");
  json j{{"map", "map.csv"},
         {"start", {scenario.start.row, scenario.start.col}},
         {"goal", {scenario.goal.row, scenario.goal.col}}};
  if (scenario.gt) {
    save_pgm(*scenario.gt, dir / "gt.pgm");
    j["gt"] = "gt.pgm";
  }
  PlannerParams p = scenario.params;
  p.grid_w = 0;  // files are already on the planning grid
  p.grid_h = 0;
  j["params"] = params_json(p);
  std::ofstream out(dir / "scenario.json");
  if (!out) throw MapIoError("cannot write " + (dir / "scenario.json").string());
  out << j.dump(2) << "\n";
}

}  // namespace urplan
