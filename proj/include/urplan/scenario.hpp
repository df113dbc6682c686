// Scenario files and suite manifests.
//
// A scenario is one JSON object:
//   {"map": "m.pgm", "gt": "gt.pgm", "start": [r, c], "goal": [r, c], "params": {...}}
// Paths are relative to the scenario file. start/goal are in source-map
// coordinates and are scaled onto the planning grid when the map is resampled.
//
// A manifest is {"scenarios": [...]} where each entry is either a scenario
// file path or an inline generator entry
//   {"synthetic": {"seed": 7, "style": "corridors", "noise": 0.3, "width": 64, "height": 64}}
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "urplan/grid.hpp"
#include "urplan/search_core.hpp"
#include "urplan/synthetic.hpp"

namespace urplan {

struct Scenario {
  std::string name;
  ProbGrid prior;  // on the planning grid, floored
  std::optional<GroundTruthMask> gt;
  Cell start;
  Cell goal;
  PlannerParams params;
};

/// Overrides fields of `base` from a JSON object text. Unknown keys and
/// out-of-range values throw ConfigError.
PlannerParams parse_params(const std::string& json_text, PlannerParams base = {});
std::string params_to_json(const PlannerParams& params);

/// Scales a source-map cell onto a grid resampled from `from` to `to`.
Cell scale_cell(Cell c, const GridShape& from, const GridShape& to);

/// Resamples to params.grid_w x grid_h (0 keeps the native size) and applies
/// the probability floor.
ProbGrid prepare_prior(const ProbGrid& raw, const PlannerParams& params);

/// Throws MapIoError on unreadable files and ConfigError on malformed JSON,
/// mismatched mask dimensions or endpoints outside the map.
Scenario load_scenario(const std::filesystem::path& path);
std::vector<Scenario> load_manifest(const std::filesystem::path& path);

/// Native-size scenario from the synthetic generator; endpoints come from
/// pick_endpoints. Throws ConfigError when the map has no usable component.
Scenario make_synthetic_scenario(std::uint64_t seed, int width, int height, MapStyle style,
                                 double noise, PlannerParams params = {});

/// Writes map.csv, map.pgm, gt.pgm and scenario.json into `dir`.
void write_scenario_dir(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace urplan
