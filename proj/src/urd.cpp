#include "urplan/urd.hpp"

#include <algorithm>
#include <cstdlib>

#include "urplan/ura.hpp"

namespace urplan {

double urd_heuristic(Cell s_start, Cell s_goal, Cell s_current, double gamma) {
  const double d_x = std::abs(s_start.row - s_current.row);
  const double d_y = std::abs(s_start.col - s_current.col);
  const double to_current = euclid(s_start, s_current);
  const double span = euclid(s_start, s_goal);
  if (span == 0.0) return to_current;
  const double u = to_current / span;
  const double h = u * (gamma * std::min(d_x, d_y) + std::abs(d_x - d_y));
  return std::min(h, to_current);
}

std::string to_string(NavOutcome outcome) {
  return outcome == NavOutcome::Reached ? "reached" : "fail";
}

// ---------------------------------------------------------------------------

DStarLite::DStarLite(const ProbGrid& known, Cell start, Cell goal, CostModel cost,
                     HeuristicKind heuristic, double gamma)
    : known_(&known),
      shape_(known.shape()),
      start_(start),
      last_(start),
      goal_(goal),
      goal_idx_(known.shape().index(goal)),
      cost_(cost),
      heuristic_(heuristic),
      gamma_(gamma),
      g_(shape_.size(), kInf),
      rhs_(shape_.size(), kInf),
      open_(shape_.size()) {
  if (!known.in_bounds(start) || !known.in_bounds(goal)) {
    throw std::invalid_argument("DStarLite: endpoint out of bounds");
  }
}

double DStarLite::heuristic(Cell from, Cell to) const {
  if (heuristic_ == HeuristicKind::Euclid) return euclid(from, to);
  return urd_heuristic(from, goal_, to, gamma_);
}

SearchKey DStarLite::calc_key(std::size_t idx) const {
  const double m = std::min(g_[idx], rhs_[idx]);
  return {m + heuristic(start_, shape_.cell(idx)) + k_m_, m};
}

double DStarLite::best_successor(std::size_t idx) const {
  double best = kInf;
  for (const auto& [nb, step] : neighbors(shape_.cell(idx), shape_)) {
    const double c = cost_.edge(step, known_->at(nb));
    best = std::min(best, c + g_[shape_.index(nb)]);
  }
  return best;
}

void DStarLite::update_vertex(std::size_t idx) {
  if (g_[idx] != rhs_[idx]) {
    open_.push(idx, calc_key(idx));
  } else {
    open_.remove(idx);
  }
}

void DStarLite::initialize() {
  std::fill(g_.begin(), g_.end(), kInf);
  std::fill(rhs_.begin(), rhs_.end(), kInf);
  open_.clear();
  k_m_ = 0.0;
  last_ = start_;
  rhs_[goal_idx_] = 0.0;
  open_.push(goal_idx_, calc_key(goal_idx_));
}

void DStarLite::seed(std::span<const double> cost_to_goal) {
  if (cost_to_goal.size() != shape_.size()) {
    throw std::invalid_argument("DStarLite::seed: size mismatch");
  }
  open_.clear();
  k_m_ = 0.0;
  last_ = start_;
  std::copy(cost_to_goal.begin(), cost_to_goal.end(), g_.begin());
  g_[goal_idx_] = 0.0;
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    rhs_[i] = i == goal_idx_ ? 0.0 : best_successor(i);
  }
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (g_[i] != rhs_[i]) open_.push(i, calc_key(i));
  }
}

std::size_t DStarLite::compute_shortest_path() {
  std::size_t expanded = 0;
  const std::size_t s = shape_.index(start_);
  while (!open_.empty() &&
         (open_.peek_min_key() < calc_key(s) || rhs_[s] != g_[s])) {
    const std::size_t u = open_.top();
    const SearchKey k_old = open_.peek_min_key();
    const SearchKey k_new = calc_key(u);
    if (k_old < k_new) {
      open_.update(u, k_new);
      continue;
    }
    ++expanded;
    const Cell cu = shape_.cell(u);
    if (g_[u] > rhs_[u]) {
      g_[u] = rhs_[u];
      open_.remove(u);
      // Predecessors reach u by paying u's entry cost.
      const double pen = cost_.penalty(known_->at(cu));
      if (!std::isfinite(pen)) continue;
      for (const auto& [nb, step] : neighbors(cu, shape_)) {
        const std::size_t p = shape_.index(nb);
        if (p == goal_idx_) continue;
        rhs_[p] = std::min(rhs_[p], step + pen + g_[u]);
        update_vertex(p);
      }
    } else {
      g_[u] = kInf;
      if (u != goal_idx_) rhs_[u] = best_successor(u);
      update_vertex(u);
      for (const auto& [nb, step] : neighbors(cu, shape_)) {
        const std::size_t p = shape_.index(nb);
        if (p == goal_idx_) continue;
        rhs_[p] = best_successor(p);
        update_vertex(p);
      }
    }
  }
  return expanded;
}

void DStarLite::notify_changed(const std::vector<Cell>& changed) {
  if (changed.empty()) return;
  k_m_ += heuristic(last_, start_);
  last_ = start_;
  // A changed cell alters the cost of every edge entering it.
  for (const Cell v : changed) {
    for (const auto& nb : neighbors(v, shape_)) {
      const std::size_t p = shape_.index(nb.cell);
      if (p == goal_idx_) continue;
      rhs_[p] = best_successor(p);
      update_vertex(p);
    }
  }
}

std::optional<Cell> DStarLite::next_step() const {
  double best = kInf;
  std::optional<Cell> choice;
  for (const auto& [nb, step] : neighbors(start_, shape_)) {
    const double v = cost_.edge(step, known_->at(nb)) + g_[shape_.index(nb)];
    if (v < best) {
      best = v;
      choice = nb;
    }
  }
  return choice;
}

std::vector<Cell> DStarLite::current_route() const {
  std::vector<Cell> route{start_};
  Cell cur = start_;
  while (cur != goal_) {
    double best = kInf;
    std::optional<Cell> choice;
    for (const auto& [nb, step] : neighbors(cur, shape_)) {
      const double v = cost_.edge(step, known_->at(nb)) + g_[shape_.index(nb)];
      if (v < best) {
        best = v;
        choice = nb;
      }
    }
    if (!choice || route.size() > shape_.size()) return {};
    cur = *choice;
    route.push_back(cur);
  }
  return route;
}

// ---------------------------------------------------------------------------

bool StallDetector::observe(Cell position) {
  const bool stalled = prev_ == position || prev_prev_ == position;
  prev_prev_ = prev_;
  prev_ = position;
  count_ = stalled ? count_ + 1 : 0;
  if (count_ >= limit_) {
    count_ = 0;
    return true;
  }
  return false;
}

void StallDetector::clear() {
  count_ = 0;
  prev_.reset();
  prev_prev_.reset();
}

UrdTree build_urd_tree(const ProbGrid& known, Cell current, Cell goal, const PlannerParams& params,
                       double gamma, HeuristicKind heuristic) {
  UraPlanner seed(known, current, goal, params, SearchDirection::Backward);
  seed.run();
  UrdTree tree{DStarLite(known, current, goal, CostModel::composite(params.w_trav), heuristic, gamma),
               seed.total_expansions()};
  tree.engine.seed(seed.g_values());
  return tree;
}

void reset_tree(UrdState& state, const ProbGrid& known, Cell current, Cell goal,
                const PlannerParams& params, HeuristicKind heuristic) {
  state.gamma *= params.gamma_decay;
  ++state.resets;
  state.tree = build_urd_tree(known, current, goal, params, state.gamma, heuristic);
}

// ---------------------------------------------------------------------------

namespace detail {

namespace {

std::vector<Cell> merge_changed(std::vector<Cell> a, const std::vector<Cell>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

NavResult navigate_incremental(const ProbGrid& prior, const GroundTruthMask& gt, Cell start,
                               Cell goal, const PlannerParams& params,
                               const IncrementalConfig& config, const NavOptions& options) {
  params.validate();
  if (!gt.in_bounds(goal)) throw std::invalid_argument("goal out of bounds");
  RobotSession session(prior, gt, start, params.scan_radius);
  session.sense();

  NavResult result;
  const ProbGrid& known = session.known();
  const std::size_t max_steps = options.max_steps ? options.max_steps : 4 * known.shape().size();

  auto fresh_tree = [&](Cell from, double gamma) {
    if (config.seed_with_ura) return build_urd_tree(known, from, goal, params, gamma, config.heuristic);
    UrdTree tree{DStarLite(known, from, goal, config.cost, config.heuristic, gamma), 0};
    tree.engine.initialize();
    return tree;
  };

  UrdState state{fresh_tree(start, params.gamma_init), params.gamma_init, 0};
  result.init_expansions = state.tree.seed_expansions;

  StallDetector stall(params.stall_limit);
  bool initial = true;
  std::size_t changed_count = 0;

  while (session.position() != goal) {
    DStarLite& engine = state.tree.engine;
    const std::size_t expanded = engine.compute_shortest_path();
    (initial ? result.init_expansions : result.nodes_expanded) += expanded;
    initial = false;
    if (options.observer) {
      options.observer({result.steps, session.position(), engine.route_cost(), changed_count,
                        expanded, state.gamma, &known});
    }
    if (!std::isfinite(engine.route_cost())) break;
    const std::optional<Cell> next = engine.next_step();
    if (!next) break;

    auto move = session.try_move(*next);
    std::vector<Cell> changed = std::move(move.changed);
    if (move.moved) changed = merge_changed(std::move(changed), session.sense());
    engine.set_start(session.position());
    if (!changed.empty()) {
      engine.notify_changed(changed);
      ++result.replans;
    }
    changed_count = changed.size();

    if (config.allow_resets && stall.observe(session.position()) && session.position() != goal) {
      reset_tree(state, known, session.position(), goal, params, config.heuristic);
      result.nodes_expanded += state.tree.seed_expansions;
      ++result.replans;
      stall.clear();
    }
    if (++result.steps >= max_steps) break;
  }

  result.traversed_path = session.trajectory();
  result.resets = state.resets;
  result.final_gamma = state.gamma;
  result.outcome = session.position() == goal ? NavOutcome::Reached : NavOutcome::Fail;
  return result;
}

}  // namespace detail

NavResult urd_navigate(const ProbGrid& prior, const GroundTruthMask& gt, Cell start, Cell goal,
                       const PlannerParams& params, const NavOptions& options) {
  detail::IncrementalConfig config{CostModel::composite(params.w_trav), options.heuristic, true, true};
  return detail::navigate_incremental(prior, gt, start, goal, params, config, options);
}

}  // namespace urplan
