#include <doctest.h>

#include <algorithm>

#include "urplan/baselines.hpp"
#include "urplan/synthetic.hpp"

using namespace urplan;

namespace {

// In-bounds 3x3 mean of the {0,1} ground truth, floored.
double blurred_truth(const GroundTruthMask& gt, Cell c) {
  double sum = 0.0;
  int n = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      const Cell x{c.row + dr, c.col + dc};
      if (!gt.in_bounds(x)) continue;
      sum += gt.traversable(x) ? 1.0 : 0.0;
      ++n;
    }
  }
  return std::max(sum / n, kProbabilityFloor);
}

}  // namespace

TEST_CASE("noise = 0 gives the blurred, floored ground truth") {
  for (const auto style : {MapStyle::Maze, MapStyle::Corridors, MapStyle::Blobs}) {
    const SyntheticMap m = gen_synthetic(5, 40, 30, style, 0.0);
    REQUIRE(m.prob.shape() == m.gt.shape());
    for (int r = 0; r < 30; ++r) {
      for (int c = 0; c < 40; ++c) CHECK(m.prob.at({r, c}) == doctest::Approx(blurred_truth(m.gt, {r, c})).epsilon(1e-12));
    }
  }
}

TEST_CASE("generation is deterministic per seed and varies across seeds") {
  const SyntheticMap a = gen_synthetic(17, 48, 48, MapStyle::Corridors, 0.3);
  const SyntheticMap b = gen_synthetic(17, 48, 48, MapStyle::Corridors, 0.3);
  const SyntheticMap c = gen_synthetic(18, 48, 48, MapStyle::Corridors, 0.3);
  CHECK(a.prob == b.prob);
  CHECK(a.gt == b.gt);
  CHECK_FALSE(a.gt == c.gt);
}

TEST_CASE("probabilities stay within [floor, 1]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticMap m = gen_synthetic(seed, 32, 24, MapStyle::Maze, 0.5);
    for (const double v : m.prob.values()) {
      CHECK(v >= kProbabilityFloor);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(gen_synthetic(1, 32, 32, MapStyle::Maze, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic(1, 32, 32, MapStyle::Maze, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic(1, 4, 32, MapStyle::Maze, 0.1), std::invalid_argument);
  CHECK(parse_map_style("corridors") == MapStyle::Corridors);
  CHECK(to_string(MapStyle::Blobs) == "blobs");
  CHECK_THROWS_AS(parse_map_style("spiral"), std::invalid_argument);
}

TEST_CASE("endpoints are distinct and connected in ground truth") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SyntheticMap m = gen_synthetic(seed, 64, 64, seed % 2 ? MapStyle::Maze : MapStyle::Corridors, 0.3);
    const auto ends = pick_endpoints(m.gt, seed);
    REQUIRE(ends.has_value());
    CHECK(ends->first != ends->second);
    ProbGrid truth(64, 64, 1.0);
    for (int r = 0; r < 64; ++r) {
      for (int c = 0; c < 64; ++c) {
        if (!m.gt.traversable({r, c})) truth.set({r, c}, 0.0);
      }
    }
    CHECK(a_star(threshold_map(truth, 0.5), ends->first, ends->second).succeeded);
  }
}

TEST_CASE("noise 0.3 corridors: thresholding disconnects at least 30% of seeds") {
  int disconnected = 0;
  constexpr int kSeeds = 40;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const SyntheticMap m = gen_synthetic(seed, 64, 64, MapStyle::Corridors, 0.3);
    const auto ends = pick_endpoints(m.gt, seed);
    REQUIRE(ends.has_value());
    disconnected += !a_star(threshold_map(m.prob, 0.5), ends->first, ends->second).succeeded;
  }
  MESSAGE("disconnected: " << disconnected << " / " << kSeeds);
  CHECK(disconnected * 10 >= kSeeds * 3);
}
