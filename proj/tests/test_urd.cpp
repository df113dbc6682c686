#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "urplan/sensing.hpp"
#include "urplan/urd.hpp"

using namespace urplan;
using namespace urplan::testing;

namespace {

bool trajectory_valid(const NavResult& r, Cell start, Cell goal, const GroundTruthMask& gt) {
  if (!is_valid_path(r.traversed_path, start, goal)) return false;
  for (const Cell c : r.traversed_path) {
    if (!gt.traversable(c)) return false;
  }
  return true;
}

double geometric_length(const std::vector<Cell>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += euclid(path[i - 1], path[i]);
  return len;
}

// 15x15: a horizontal wall on row 7 with its real gap at the far right,
// while the prior believes the gap is at the far left.
struct CorridorFixture {
  ProbGrid prior{15, 15, 0.9};
  GroundTruthMask gt{15, 15};
  Cell start{1, 1};
  Cell goal{13, 1};

  CorridorFixture() {
    for (int c = 0; c < 15; ++c) {
      if (c != 14) gt.set({7, c}, Label::Blocked);
      prior.set({7, c}, c == 0 ? 0.95 : 0.05);
    }
  }
};

}  // namespace

TEST_CASE("urd_heuristic hand cases") {
  CHECK(urd_heuristic({0, 0}, {10, 0}, {0, 0}, 1.0) == 0.0);
  CHECK(std::abs(urd_heuristic({0, 0}, {10, 0}, {3, 4}, 1.0) - 2.0) <= 1e-12);
  // On the start-goal axis d_y = 0, so H = u * d_x.
  const double h = urd_heuristic({0, 0}, {10, 0}, {4, 0}, kSqrt2);
  CHECK(std::abs(h - 0.4 * 4.0) <= 1e-12);
  // Far beyond the goal the Euclidean cap binds: u = 3, H = 3 * 30 = 90 > 30.
  CHECK(urd_heuristic({0, 0}, {10, 0}, {30, 0}, kSqrt2) == 30.0);
}

TEST_CASE("urd_heuristic never exceeds the Euclidean distance") {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const Cell s = random_cell(rng, 50, 50);
    const Cell g = random_cell(rng, 50, 50);
    const Cell c = random_cell(rng, 50, 50);
    if (s == g) continue;
    const double gamma = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    const double h = urd_heuristic(s, g, c, gamma);
    CHECK(h >= 0.0);
    CHECK(h <= euclid(s, c) + 1e-12);
  }
}

TEST_CASE("D*-lite: a consistent tree does no work") {
  const ProbGrid known(10, 10, 0.8);
  DStarLite engine(known, {0, 0}, {9, 9}, CostModel::composite(10.0), HeuristicKind::Euclid, kSqrt2);
  engine.initialize();
  CHECK(engine.compute_shortest_path() > 0);
  CHECK(engine.compute_shortest_path() == 0);
  engine.notify_changed({});
  CHECK(engine.compute_shortest_path() == 0);
  CHECK(engine.route_cost() == doctest::Approx(dijkstra_oracle(known, {0, 0}, {9, 9}, 10.0).cost));
}

TEST_CASE("D*-lite: a seeded tree converges to the exact cost") {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const ProbGrid known = random_grid(rng, 18, 14);
    const Cell s = random_cell(rng, 18, 14);
    const Cell g = random_cell(rng, 18, 14);
    if (s == g) continue;
    UrdTree tree = build_urd_tree(known, s, g, PlannerParams{}, kSqrt2);
    tree.engine.compute_shortest_path();
    CHECK(tree.engine.route_cost() == doctest::Approx(dijkstra_oracle(known, s, g, 10.0).cost).epsilon(1e-12));
  }
}

TEST_CASE("D*-lite: an off-route block keeps the route and stays local") {
  ProbGrid known(20, 20, 1.0);
  DStarLite engine(known, {10, 0}, {10, 19}, CostModel::composite(10.0), HeuristicKind::Euclid, kSqrt2);
  engine.initialize();
  engine.compute_shortest_path();
  const auto before = engine.current_route();
  const double cost = engine.route_cost();
  known.set({0, 0}, 0.0);
  engine.notify_changed({{0, 0}});
  const std::size_t work = engine.compute_shortest_path();
  CHECK(engine.current_route() == before);
  CHECK(engine.route_cost() == cost);
  CHECK(work <= 9);  // the blocked cell and its neighbors at most
}

TEST_CASE("D*-lite: an on-route block matches Dijkstra on the revealed map") {
  for (const auto kind : {HeuristicKind::Euclid, HeuristicKind::Urd}) {
    ProbGrid known(20, 20, 1.0);
    DStarLite engine(known, {10, 0}, {10, 19}, CostModel::composite(10.0), kind, kSqrt2);
    engine.initialize();
    engine.compute_shortest_path();
    std::vector<Cell> wall;
    for (int r = 5; r <= 15; ++r) {
      known.set({r, 10}, 0.0);
      wall.push_back({r, 10});
    }
    engine.notify_changed(wall);
    engine.compute_shortest_path();
    CHECK(engine.route_cost() == doctest::Approx(dijkstra_oracle(known, {10, 0}, {10, 19}, 10.0).cost).epsilon(1e-12));
  }
}

TEST_CASE("navigation: route cost equals Dijkstra on the known map after every reveal") {
  Rng rng(19);
  std::size_t events = 0;
  for (const auto kind : {HeuristicKind::Euclid, HeuristicKind::Urd}) {
    for (int t = 0; t < 12; ++t) {
      const GroundTruthMask gt = random_mask(rng, 24, 24, 0.25);
      const ProbGrid prior = random_grid(rng, 24, 24);
      const Cell s = random_cell(rng, 24, 24);
      const Cell g = random_cell(rng, 24, 24);
      if (s == g || !gt.traversable(s) || !gt.traversable(g)) continue;
      PlannerParams p;
      p.scan_radius = 4;
      NavOptions options;
      options.heuristic = kind;
      options.observer = [&](const NavStep& step) {
        const double exact = dijkstra_oracle(*step.known, step.current, g, p.w_trav).cost;
        if (std::isfinite(exact)) {
          CHECK(step.route_cost == doctest::Approx(exact).epsilon(1e-12));
        } else {
          CHECK(std::isinf(step.route_cost));
        }
        ++events;
      };
      const NavResult r = urd_navigate(prior, gt, s, g, p, options);
      if (r.outcome == NavOutcome::Reached) CHECK(trajectory_valid(r, s, g, gt));
    }
  }
  CHECK(events > 100);
}

TEST_CASE("navigation: all-traversable ground truth is reached without resets") {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const ProbGrid prior = random_grid(rng, 25, 25);
    const GroundTruthMask gt(25, 25);
    const NavResult r = urd_navigate(prior, gt, {0, 0}, {24, 20}, PlannerParams{});
    CHECK(r.outcome == NavOutcome::Reached);
    CHECK(r.resets == 0);
    CHECK(trajectory_valid(r, {0, 0}, {24, 20}, gt));
    CHECK(geometric_length(r.traversed_path) >= euclid({0, 0}, {24, 20}));
  }
}

TEST_CASE("navigation: corridor fixture with a misplaced gap") {
  const CorridorFixture f;
  PlannerParams p;
  p.scan_radius = 3;
  const NavResult r = urd_navigate(f.prior, f.gt, f.start, f.goal, p);
  REQUIRE(r.outcome == NavOutcome::Reached);
  CHECK(trajectory_valid(r, f.start, f.goal, f.gt));
  CHECK(r.replans > 0);
  // Nothing beats the shortest route on the full ground truth.
  ProbGrid truth(15, 15, 1.0);
  for (int c = 0; c < 14; ++c) truth.set({7, c}, 0.0);
  const double best = dijkstra_oracle(truth, f.start, f.goal, 0.0).cost;
  CHECK(geometric_length(r.traversed_path) >= best - 1e-9);
  // The gap is at column 14, so the robot must have gone through it.
  CHECK(std::find(r.traversed_path.begin(), r.traversed_path.end(), Cell{7, 14}) != r.traversed_path.end());
}

TEST_CASE("navigation: a sealed goal fails") {
  ProbGrid prior(12, 12, 0.9);
  GroundTruthMask gt(12, 12);
  const Cell goal{9, 9};
  for (const auto& n : neighbors(goal, gt.shape())) gt.set(n.cell, Label::Blocked);
  const NavResult r = urd_navigate(prior, gt, {0, 0}, goal, PlannerParams{});
  CHECK(r.outcome == NavOutcome::Fail);
  for (const Cell c : r.traversed_path) CHECK(gt.traversable(c));
}

TEST_CASE("stall detector fires once per limit consecutive stalled iterations") {
  StallDetector stall(3);
  CHECK_FALSE(stall.observe({0, 0}));
  CHECK_FALSE(stall.observe({0, 1}));  // moved in
  CHECK_FALSE(stall.observe({0, 1}));
  CHECK_FALSE(stall.observe({0, 1}));
  CHECK(stall.observe({0, 1}));  // third static iteration
  CHECK_FALSE(stall.observe({0, 1}));
  CHECK_FALSE(stall.observe({0, 2}));
  // A-B-A oscillation counts as stalled.
  StallDetector osc(2);
  CHECK_FALSE(osc.observe({0, 0}));
  CHECK_FALSE(osc.observe({0, 1}));
  CHECK_FALSE(osc.observe({0, 0}));
  CHECK(osc.observe({0, 1}));
}

TEST_CASE("reset_tree decays gamma and matches a fresh tree") {
  Rng rng(10);
  const ProbGrid known = random_grid(rng, 16, 16);
  const Cell goal{15, 15};
  PlannerParams p;
  UrdState state{build_urd_tree(known, {0, 0}, goal, p, p.gamma_init), p.gamma_init, 0};
  state.tree.engine.compute_shortest_path();
  const Cell here{4, 7};
  for (int k = 1; k <= 3; ++k) {
    reset_tree(state, known, here, goal, p);
    CHECK(state.resets == static_cast<std::size_t>(k));
    CHECK(state.gamma == doctest::Approx(p.gamma_init * std::pow(p.gamma_decay, k)).epsilon(1e-15));
  }
  state.tree.engine.compute_shortest_path();
  UrdTree fresh = build_urd_tree(known, here, goal, p, state.gamma);
  fresh.engine.compute_shortest_path();
  CHECK(state.tree.engine.next_step() == fresh.engine.next_step());
  CHECK(state.tree.engine.route_cost() == fresh.engine.route_cost());
}

TEST_CASE("gamma never increases during navigation") {
  // A prior that keeps luring the robot into a dead end forces resets.
  Rng rng(77);
  for (int t = 0; t < 8; ++t) {
    const GroundTruthMask gt = random_mask(rng, 20, 20, 0.35);
    const ProbGrid prior = random_grid(rng, 20, 20);
    if (!gt.traversable({0, 0}) || !gt.traversable({19, 19})) continue;
    double last = kInf;
    NavOptions options;
    options.observer = [&](const NavStep& s) {
      CHECK(s.gamma <= last);
      last = s.gamma;
    };
    PlannerParams p;
    p.scan_radius = 2;
    const NavResult r = urd_navigate(prior, gt, {0, 0}, {19, 19}, p, options);
    CHECK(r.final_gamma == doctest::Approx(p.gamma_init * std::pow(p.gamma_decay, static_cast<double>(r.resets))));
  }
}

TEST_CASE("simulator: bumps reveal, known blocks are never entered") {
  GroundTruthMask gt(5, 5);
  gt.set({2, 3}, Label::Blocked);
  RobotSession session(ProbGrid(5, 5, 0.9), gt, {2, 2}, 1);
  // Radius 1 covers (2,3), so sense first would reveal it; bump before sensing.
  const auto bump = session.try_move({2, 3});
  CHECK_FALSE(bump.moved);
  CHECK(bump.changed == std::vector<Cell>{{2, 3}});
  CHECK(session.known().at({2, 3}) == 0.0);
  CHECK(session.position() == Cell{2, 2});
  CHECK_THROWS_AS(session.try_move({2, 3}), std::logic_error);
  CHECK_THROWS_AS(session.try_move({4, 4}), std::logic_error);
  CHECK(session.try_move({1, 2}).moved);
  CHECK(session.trajectory() == std::vector<Cell>{{2, 2}, {1, 2}});
}
