#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "test_support.hpp"
#include "urplan/search_core.hpp"

using namespace urplan;
using namespace urplan::testing;

namespace {

// Minimum over all simple paths, depth-first with a cost bound.
double exhaustive_min_cost(const ProbGrid& g, Cell start, Cell goal, double w_trav) {
  std::vector<char> on_path(g.shape().size(), 0);
  double best = kInf;
  std::function<void(Cell, double)> dfs = [&](Cell u, double cost) {
    if (cost >= best) return;
    if (u == goal) {
      best = cost;
      return;
    }
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const Cell v{u.row + dr, u.col + dc};
        if ((dr == 0 && dc == 0) || !g.in_bounds(v) || on_path[g.shape().index(v)]) continue;
        const double m = g.at(v);
        if (m == 0.0) continue;
        const double step = (dr != 0 && dc != 0) ? std::sqrt(2.0) : 1.0;
        on_path[g.shape().index(v)] = 1;
        dfs(v, cost + step + w_trav * (1.0 - m));
        on_path[g.shape().index(v)] = 0;
      }
    }
  };
  on_path[g.shape().index(start)] = 1;
  dfs(start, 0.0);
  return best;
}

}  // namespace

TEST_CASE("neighbors: interior, corner, edge and step lengths") {
  const GridShape shape{5, 4};
  CHECK(neighbors({2, 2}, shape).size() == 8);
  CHECK(neighbors({0, 0}, shape).size() == 3);
  CHECK(neighbors({0, 2}, shape).size() == 5);
  for (const auto& n : neighbors({1, 1}, shape)) {
    const bool diagonal = n.cell.row != 1 && n.cell.col != 1;
    CHECK(n.step == (diagonal ? kSqrt2 : 1.0));
  }
  CHECK(kSqrt2 == doctest::Approx(1.4142135623730951).epsilon(1e-15));
}

TEST_CASE("neighbors never leave the grid") {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const int w = std::uniform_int_distribution<int>(1, 6)(rng);
    const int h = std::uniform_int_distribution<int>(1, 6)(rng);
    const GridShape shape{w, h};
    const Cell c = random_cell(rng, w, h);
    for (const auto& n : neighbors(c, shape)) {
      CHECK(shape.in_bounds(n.cell));
      CHECK(adjacent8(c, n.cell));
    }
  }
}

TEST_CASE("edge_cost examples") {
  ProbGrid g(3, 3, 1.0);
  CHECK(edge_cost({1, 1}, {1, 2}, g, 10.0) == 1.0);
  CHECK(edge_cost({1, 1}, {1, 2}, g, 0.0) == 1.0);
  g.set({2, 2}, 0.5);
  CHECK(edge_cost({1, 1}, {2, 2}, g, 10.0) == doctest::Approx(kSqrt2 + 5.0).epsilon(1e-15));
  CHECK(edge_cost({1, 1}, {2, 2}, g, 10.0) == doctest::Approx(6.4142).epsilon(1e-4));
  g.set({0, 0}, 0.0);
  CHECK(edge_cost({1, 1}, {0, 0}, g, 10.0) == kInf);
}

TEST_CASE("edge_cost: geometry is symmetric, the penalty follows the destination") {
  Rng rng(4);
  const ProbGrid g = random_grid(rng, 6, 6);
  for (int t = 0; t < 100; ++t) {
    const Cell a = random_cell(rng, 6, 6);
    const auto nbrs = neighbors(a, g.shape());
    const Cell b = nbrs[rng() % nbrs.size()].cell;
    const double ab = edge_cost(a, b, g, 10.0);
    const double ba = edge_cost(b, a, g, 10.0);
    CHECK(ab - 10.0 * (1.0 - g.at(b)) == doctest::Approx(ba - 10.0 * (1.0 - g.at(a))));
    CHECK(edge_cost(a, b, g, 0.0) == edge_cost(b, a, g, 0.0));
  }
}

TEST_CASE("cost models") {
  const CostModel tau = CostModel::thresholded(0.5);
  CHECK(tau.edge(1.0, 0.5) == 1.0);
  CHECK(tau.edge(1.0, 0.49) == kInf);
  const CostModel comp = CostModel::composite(10.0);
  CHECK(comp.edge(kSqrt2, 1.0) == kSqrt2);
  CHECK(comp.edge(1.0, 1e-6) == doctest::Approx(11.0).epsilon(1e-6));
}

TEST_CASE("path_cost and is_valid_path") {
  const ProbGrid g(4, 4, 1.0);
  const std::vector<Cell> p{{0, 0}, {1, 1}, {1, 2}};
  CHECK(path_cost(p, g, CostModel::composite(10.0)) == doctest::Approx(kSqrt2 + 1.0));
  CHECK(is_valid_path(p, {0, 0}, {1, 2}));
  CHECK_FALSE(is_valid_path(p, {0, 0}, {1, 1}));
  CHECK_FALSE(is_valid_path({{0, 0}, {2, 2}}, {0, 0}, {2, 2}));
  CHECK_THROWS_AS(path_cost({{0, 0}, {2, 2}}, g, CostModel::composite(10.0)), std::invalid_argument);
}

TEST_CASE("priority queue: basic ordering") {
  IndexedHeap q(10);
  q.insert(3, {2, 0});
  q.insert(7, {1, 0});
  CHECK(q.peek_min_key() == SearchKey{1, 0});
  CHECK(q.pop_min() == 7);

  IndexedHeap lex(10);
  lex.insert(1, {1, 5});
  lex.insert(2, {1, 2});
  CHECK(lex.pop_min() == 2);

  IndexedHeap ties(10);
  ties.insert(9, {1, 1});
  ties.insert(4, {1, 1});
  CHECK(ties.pop_min() == 4);  // lower cell index wins a full tie
}

TEST_CASE("priority queue: update, remove, negative keys, empty errors") {
  IndexedHeap q(5);
  q.insert(0, {5, 0});
  q.insert(1, {3, 0});
  q.update(0, {-2, 0});
  CHECK(q.size() == 2);
  CHECK(q.top() == 0);
  q.update(0, {9, 0});
  CHECK(q.top() == 1);
  q.remove(1);
  CHECK(q.pop_min() == 0);
  CHECK(q.empty());
  CHECK_THROWS_AS(q.pop_min(), EmptyQueueError);
  CHECK_THROWS_AS(static_cast<void>(q.peek_min_key()), EmptyQueueError);
}

TEST_CASE("priority queue: 1000 random operations pop in sorted order") {
  Rng rng(17);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  IndexedHeap q(1000);
  std::vector<std::pair<SearchKey, std::size_t>> expect;
  for (std::size_t i = 0; i < 1000; ++i) {
    const SearchKey k{std::round(u(rng)), std::round(u(rng))};
    q.insert(i, k);
  }
  // Re-key a third of them.
  for (std::size_t i = 0; i < 1000; i += 3) q.update(i, {std::round(u(rng)), std::round(u(rng))});
  for (std::size_t i = 0; i < 1000; ++i) expect.emplace_back(q.key_of(i), i);
  std::sort(expect.begin(), expect.end());
  for (const auto& [k, i] : expect) {
    REQUIRE(q.peek_min_key() == k);
    REQUIRE(q.pop_min() == i);
  }
  CHECK(q.empty());
}

TEST_CASE("dijkstra_oracle: hand cases") {
  const ProbGrid g(4, 4, 1.0);
  const PlanResult r = dijkstra_oracle(g, {0, 0}, {0, 3}, 10.0);
  CHECK(r.succeeded);
  CHECK(r.cost == 3.0);
  CHECK(r.path == std::vector<Cell>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(dijkstra_oracle(g, {1, 1}, {2, 2}, 10.0).cost == kSqrt2);

  ProbGrid walled(3, 3, 1.0);
  for (int r2 = 0; r2 < 3; ++r2) walled.set({r2, 1}, 0.0);
  CHECK_FALSE(dijkstra_oracle(walled, {0, 0}, {0, 2}, 10.0).succeeded);
}

TEST_CASE("dijkstra_oracle equals exhaustive enumeration on 4x4 grids") {
  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    ProbGrid g = random_grid(rng, 4, 4);
    if (t % 2 == 0) g.set(random_cell(rng, 4, 4), 0.0);
    const Cell s = random_cell(rng, 4, 4);
    const Cell e = random_cell(rng, 4, 4);
    if (s == e || g.at(e) == 0.0) continue;
    const double brute = exhaustive_min_cost(g, s, e, 10.0);
    const PlanResult r = dijkstra_oracle(g, s, e, 10.0);
    CHECK(r.succeeded == std::isfinite(brute));
    if (r.succeeded) {
      CHECK(r.cost == doctest::Approx(brute).epsilon(1e-12));
      CHECK(is_valid_path(r.path, s, e));
      CHECK(path_cost(r.path, g, CostModel::composite(10.0)) == doctest::Approx(r.cost).epsilon(1e-12));
    }
  }
}

TEST_CASE("cost_to_go agrees with per-source Dijkstra") {
  Rng rng(31);
  const ProbGrid g = random_grid(rng, 8, 7);
  const Cell target{6, 2};
  const auto ctg = cost_to_go(g, target, CostModel::composite(10.0));
  for (int t = 0; t < 20; ++t) {
    const Cell s = random_cell(rng, 8, 7);
    CHECK(ctg[g.shape().index(s)] == doctest::Approx(dijkstra_oracle(g, s, target, 10.0).cost).epsilon(1e-12));
  }
}

TEST_CASE("PlannerParams validation") {
  PlannerParams p;
  CHECK_NOTHROW(p.validate());
  p.epsilon_init = 0.9;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.w_trav = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.gamma_decay = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.threshold = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
