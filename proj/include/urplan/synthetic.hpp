// Seeded synthetic traversability maps: a ground-truth layout plus a noisy,
// blurred probability map standing in for a segmentation network's output.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "urplan/grid.hpp"

namespace urplan {

enum class MapStyle { Maze, Corridors, Blobs };

std::string to_string(MapStyle style);
/// Throws std::invalid_argument for unknown names.
MapStyle parse_map_style(const std::string& name);

struct SyntheticMap {
  ProbGrid prob;
  GroundTruthMask gt;
};

/// Builds the ground truth for `style`, then prob = clamp(blur3x3(gt +
/// U(-noise, noise)), floor, 1). Deterministic per seed. noise must lie in
/// [0, 0.5].
SyntheticMap gen_synthetic(std::uint64_t seed, int width, int height, MapStyle style, double noise);

/// Two far-apart traversable cells in the largest ground-truth component.
/// Empty when that component has fewer than two cells.
std::optional<std::pair<Cell, Cell>> pick_endpoints(const GroundTruthMask& gt, std::uint64_t seed);

}  // namespace urplan
