#include "urplan/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "urplan/sensing.hpp"

namespace urplan {

BinaryMap::BinaryMap(int width, int height, std::vector<std::uint8_t> free_cells)
    : shape_{width, height}, free_(std::move(free_cells)) {
  if (free_.size() != shape_.size()) throw std::invalid_argument("BinaryMap: size mismatch");
}

std::size_t BinaryMap::free_count() const {
  return static_cast<std::size_t>(std::count(free_.begin(), free_.end(), std::uint8_t{1}));
}

ProbGrid BinaryMap::as_grid() const {
  std::vector<double> v(free_.size());
  std::transform(free_.begin(), free_.end(), v.begin(), [](std::uint8_t f) { return f ? 1.0 : 0.0; });
  return ProbGrid(width(), height(), std::move(v));
}

BinaryMap threshold_map(const ProbGrid& grid, double tau) {
  std::vector<std::uint8_t> f(grid.values().size());
  std::transform(grid.values().begin(), grid.values().end(), f.begin(),
                 [tau](double p) { return static_cast<std::uint8_t>(p >= tau); });
  return BinaryMap(grid.width(), grid.height(), std::move(f));
}

// ---------------------------------------------------------------------------

PlanResult a_star(const BinaryMap& map, Cell start, Cell goal) {
  if (!map.in_bounds(start) || !map.in_bounds(goal)) {
    throw std::invalid_argument("a_star: endpoint out of bounds");
  }
  PlanResult out;
  if (!map.free(start) || !map.free(goal)) return out;

  const GridShape& shape = map.shape();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<double> g(shape.size(), kInf);
  std::vector<std::size_t> parent(shape.size(), kNone);
  std::vector<char> closed(shape.size(), 0);
  IndexedHeap open(shape.size());

  const std::size_t s = shape.index(start);
  const std::size_t t = shape.index(goal);
  g[s] = 0.0;
  open.push(s, {euclid(start, goal), euclid(start, goal)});
  while (!open.empty()) {
    const std::size_t u = open.pop_min();
    closed[u] = 1;
    ++out.nodes_expanded;
    if (u == t) break;
    for (const auto& [nb, step] : neighbors(shape.cell(u), shape)) {
      if (!map.free(nb)) continue;
      const std::size_t v = shape.index(nb);
      if (closed[v]) continue;
      const double cand = g[u] + step;
      if (cand < g[v]) {
        g[v] = cand;
        parent[v] = u;
        const double h = euclid(nb, goal);
        open.push(v, {cand + h, h});
      }
    }
  }
  if (!std::isfinite(g[t])) return out;
  out.path = trace_back(parent, shape, start, goal);
  out.cost = path_cost(out.path, map.as_grid(), CostModel::composite(0.0));
  out.succeeded = true;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool segment_free(const BinaryMap& map, Cell a, Cell b) {
  const auto line = bresenham_line(a, b);
  return std::all_of(line.begin(), line.end(), [&](Cell c) { return map.free(c); });
}

struct RrtNode {
  Cell pos;
  std::size_t parent;
  double cost;
  std::vector<std::size_t> children;
};

class RrtStar {
 public:
  RrtStar(const BinaryMap& map, Cell start, Cell goal, const RrtParams& params)
      : map_(map), goal_(goal), params_(params), rng_(params.seed),
        node_at_(map.shape().size(), kNone) {
    for (std::size_t i = 0; i < map.shape().size(); ++i) {
      if (map.free(map.shape().cell(i))) free_cells_.push_back(i);
    }
    add_node(start, kNone, 0.0);
  }

  PlanResult run() {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, free_cells_.size() - 1);
    PlanResult out;
    for (int it = 0; it < params_.iterations; ++it) {
      ++out.nodes_expanded;
      const Cell sample = coin(rng_) < params_.goal_bias
                              ? goal_
                              : map_.shape().cell(free_cells_[pick(rng_)]);
      extend(sample);
    }
    const std::size_t goal_node = node_at_[map_.shape().index(goal_)];
    if (goal_node == kNone) return out;

    std::vector<Cell> waypoints;
    for (std::size_t n = goal_node; n != kNone; n = nodes_[n].parent) waypoints.push_back(nodes_[n].pos);
    std::reverse(waypoints.begin(), waypoints.end());
    out.path.push_back(waypoints.front());
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      const auto seg = bresenham_line(waypoints[i - 1], waypoints[i]);
      out.path.insert(out.path.end(), seg.begin() + 1, seg.end());
    }
    out.cost = path_cost(out.path, map_.as_grid(), CostModel::composite(0.0));
    out.succeeded = true;
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t add_node(Cell pos, std::size_t parent, double cost) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({pos, parent, cost, {}});
    node_at_[map_.shape().index(pos)] = id;
    if (parent != kNone) nodes_[parent].children.push_back(id);
    return id;
  }

  Cell steer(Cell from, Cell to) const {
    const double d = euclid(from, to);
    if (d <= params_.step) return to;
    const double t = params_.step / d;
    return {static_cast<int>(std::lround(from.row + t * (to.row - from.row))),
            static_cast<int>(std::lround(from.col + t * (to.col - from.col)))};
  }

  void reparent(std::size_t child, std::size_t parent, double cost) {
    auto& old_children = nodes_[nodes_[child].parent].children;
    old_children.erase(std::find(old_children.begin(), old_children.end(), child));
    nodes_[child].parent = parent;
    nodes_[parent].children.push_back(child);
    const double delta = cost - nodes_[child].cost;
    std::vector<std::size_t> stack{child};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      nodes_[n].cost += delta;
      stack.insert(stack.end(), nodes_[n].children.begin(), nodes_[n].children.end());
    }
  }

  // Inserts `pos` with the cheapest collision-free parent among `near`, then
  // rewires `near` through it.
  void connect(Cell pos, const std::vector<std::size_t>& near) {
    std::vector<std::pair<double, std::size_t>> cands;
    cands.reserve(near.size());
    for (const std::size_t n : near) cands.emplace_back(nodes_[n].cost + euclid(nodes_[n].pos, pos), n);
    std::sort(cands.begin(), cands.end());
    std::size_t parent = kNone;
    double cost = kInf;
    for (const auto& [c, n] : cands) {
      if (segment_free(map_, nodes_[n].pos, pos)) {
        parent = n;
        cost = c;
        break;
      }
    }
    if (parent == kNone) return;
    const std::size_t id = add_node(pos, parent, cost);
    for (const std::size_t n : near) {
      if (n == parent || n == 0) continue;
      const double via = cost + euclid(pos, nodes_[n].pos);
      if (via < nodes_[n].cost && segment_free(map_, pos, nodes_[n].pos)) reparent(n, id, via);
    }
  }

  void extend(Cell sample) {
    std::size_t nearest = 0;
    double best = kInf;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double d = euclid(nodes_[i].pos, sample);
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    const Cell pos = steer(nodes_[nearest].pos, sample);
    if (pos == nodes_[nearest].pos || !map_.in_bounds(pos) || !map_.free(pos)) return;
    if (node_at_[map_.shape().index(pos)] != kNone) return;
    if (!segment_free(map_, nodes_[nearest].pos, pos)) return;

    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (euclid(nodes_[i].pos, pos) <= params_.radius) near.push_back(i);
    }
    connect(pos, near);
    const std::size_t id = node_at_[map_.shape().index(pos)];
    if (id == kNone || pos == goal_) return;

    // Goal connection once a node lands within one step of the goal.
    if (euclid(pos, goal_) <= params_.step && segment_free(map_, pos, goal_)) {
      const double via = nodes_[id].cost + euclid(pos, goal_);
      const std::size_t g = node_at_[map_.shape().index(goal_)];
      if (g == kNone) {
        add_node(goal_, id, via);
      } else if (via < nodes_[g].cost) {
        reparent(g, id, via);
      }
    }
  }

  const BinaryMap& map_;
  Cell goal_;
  RrtParams params_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> free_cells_;
  std::vector<std::size_t> node_at_;
  std::vector<RrtNode> nodes_;
};

}  // namespace

PlanResult rrt_star(const BinaryMap& map, Cell start, Cell goal, const RrtParams& params) {
  if (!map.in_bounds(start) || !map.in_bounds(goal)) {
    throw std::invalid_argument("rrt_star: endpoint out of bounds");
  }
  if (!map.free(start) || !map.free(goal)) {
    throw std::invalid_argument("rrt_star: start or goal is blocked");
  }
  if (start == goal) {
    PlanResult out;
    out.path = {start};
    out.cost = 0.0;
    out.succeeded = true;
    return out;
  }
  return RrtStar(map, start, goal, params).run();
}

// ---------------------------------------------------------------------------

NavResult d_star_lite_navigate(const ProbGrid& prior, const GroundTruthMask& gt, Cell start,
                               Cell goal, const PlannerParams& params, const NavObserver& observer) {
  detail::IncrementalConfig config{CostModel::thresholded(params.threshold), HeuristicKind::Euclid,
                                   false, false};
  NavOptions options;
  options.heuristic = HeuristicKind::Euclid;
  options.observer = observer;
  return detail::navigate_incremental(prior, gt, start, goal, params, config, options);
}

NavResult rra_star_navigate(const ProbGrid& prior, const GroundTruthMask& gt, Cell start,
                            Cell goal, const PlannerParams& params, const NavObserver& observer) {
  params.validate();
  if (!gt.in_bounds(goal)) throw std::invalid_argument("goal out of bounds");
  RobotSession session(prior, gt, start, params.scan_radius);
  session.sense();
  const ProbGrid& known = session.known();
  const std::size_t max_steps = 4 * known.shape().size();

  NavResult result;
  result.final_gamma = params.gamma_init;
  auto plan = [&] {
    ++result.planner_calls;
    return a_star(threshold_map(known, params.threshold), session.position(), goal);
  };

  PlanResult route = plan();
  result.init_expansions = route.nodes_expanded;
  std::size_t at = 0;  // index of the robot on `route.path`
  std::size_t changed_count = 0;
  std::size_t step_expansions = route.nodes_expanded;

  while (route.succeeded && session.position() != goal) {
    if (observer) {
      const std::vector<Cell> ahead(route.path.begin() + static_cast<std::ptrdiff_t>(at), route.path.end());
      const double cost = path_cost(ahead, known, CostModel::thresholded(params.threshold));
      observer({result.steps, session.position(), cost, changed_count, step_expansions, params.gamma_init, &known});
    }
    step_expansions = 0;
    auto move = session.try_move(route.path[at + 1]);
    std::vector<Cell> changed = std::move(move.changed);
    if (move.moved) {
      ++at;
      const auto seen = session.sense();
      changed.insert(changed.end(), seen.begin(), seen.end());
    }
    changed_count = changed.size();

    const bool blocked_ahead =
        std::any_of(route.path.begin() + static_cast<std::ptrdiff_t>(at) + 1, route.path.end(),
                    [&](Cell c) { return known.at(c) < params.threshold; });
    if (blocked_ahead) {
      ++result.replans;
      route = plan();
      result.nodes_expanded += route.nodes_expanded;
      step_expansions = route.nodes_expanded;
      at = 0;
    }
    if (++result.steps >= max_steps) break;
  }

  result.traversed_path = session.trajectory();
  result.outcome = session.position() == goal ? NavOutcome::Reached : NavOutcome::Fail;
  return result;
}

}  // namespace urplan
