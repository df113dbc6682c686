#include "urplan/ura.hpp"

#include <algorithm>

namespace urplan {

double ura_f_value(double g, Cell s, Cell goal, const ProbGrid& grid, double eps, double alpha) {
  return g + eps * (euclid(s, goal) - alpha * grid.at(s));
}

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

UraPlanner::UraPlanner(const ProbGrid& grid, Cell start, Cell goal, const PlannerParams& params,
                       SearchDirection direction)
    : grid_(grid),
      shape_(grid.shape()),
      start_(start),
      goal_(goal),
      params_(params),
      direction_(direction),
      cost_(CostModel::composite(params.w_trav)),
      epsilon_(params.epsilon_init) {
  params_.validate();
  if (!grid.in_bounds(start) || !grid.in_bounds(goal)) {
    throw std::invalid_argument("ura_star: endpoint out of bounds");
  }
  const bool fwd = direction_ == SearchDirection::Forward;
  source_ = shape_.index(fwd ? start : goal);
  target_ = shape_.index(fwd ? goal : start);
  target_cell_ = fwd ? goal : start;

  g_.assign(shape_.size(), kInf);
  parent_.assign(shape_.size(), kNone);
  closed_.assign(shape_.size(), 0);
  in_incons_.assign(shape_.size(), 0);
  open_.reset(shape_.size());

  g_[source_] = 0.0;
  if (source_ != target_) open_.push(source_, key(source_));
}

SearchKey UraPlanner::key(std::size_t idx) const {
  const Cell s = shape_.cell(idx);
  return {ura_f_value(g_[idx], s, target_cell_, grid_, epsilon_, params_.alpha),
          euclid(s, target_cell_)};
}

// Edges are always priced in the start -> goal sense: entering a cell costs
// its step plus that cell's penalty.
double UraPlanner::edge(std::size_t from, std::size_t to, double step) const {
  const std::size_t dest = direction_ == SearchDirection::Forward ? to : from;
  return cost_.edge(step, grid_[dest]);
}

std::size_t UraPlanner::improve_path() {
  std::size_t expanded = 0;
  while (!open_.empty()) {
    const double target_f = std::isfinite(g_[target_]) ? key(target_).primary : kInf;
    if (target_f <= open_.peek_min_key().primary) break;

    const std::size_t u = open_.pop_min();
    closed_[u] = 1;
    ++expanded;
    for (const auto& [nb, step] : neighbors(shape_.cell(u), shape_)) {
      const std::size_t v = shape_.index(nb);
      const double c = edge(u, v, step);
      if (!std::isfinite(c)) continue;
      const double cand = g_[u] + c;
      if (cand < g_[v]) {
        g_[v] = cand;
        parent_[v] = u;
        if (!closed_[v]) {
          open_.push(v, key(v));
        } else if (!in_incons_[v]) {
          in_incons_[v] = 1;
          incons_.push_back(v);
        }
      }
    }
  }
  expansions_ += expanded;
  record_pass(expanded);
  return expanded;
}

void UraPlanner::next_pass(double epsilon) {
  epsilon_ = std::max(1.0, epsilon);
  for (const std::size_t s : incons_) {
    in_incons_[s] = 0;
    open_.push(s, key(s));
  }
  incons_.clear();
  std::vector<std::size_t> queued;
  queued.reserve(open_.size());
  open_.for_each([&](std::size_t idx) { queued.push_back(idx); });
  for (const std::size_t idx : queued) open_.update(idx, key(idx));
  std::fill(closed_.begin(), closed_.end(), 0);
}

std::vector<Cell> UraPlanner::extract_path() const {
  if (!std::isfinite(g_[target_])) return {};
  std::vector<Cell> chain;
  std::size_t cur = target_;
  while (true) {
    chain.push_back(shape_.cell(cur));
    if (cur == source_) break;
    cur = parent_[cur];
    if (cur == kNone || chain.size() > shape_.size()) return {};
  }
  // The chain runs target -> source; forward searches need it reversed.
  if (direction_ == SearchDirection::Forward) std::reverse(chain.begin(), chain.end());
  return chain;
}

void UraPlanner::record_pass(std::size_t expansions) {
  std::vector<Cell> path = extract_path();
  if (!path.empty()) {
    const double c = path_cost(path, grid_, cost_);
    if (c < best_cost_) {
      best_cost_ = c;
      best_path_ = std::move(path);
    }
  }
  passes_.push_back({epsilon_, expansions, best_cost_});
}

PlanResult UraPlanner::incumbent() const {
  PlanResult out;
  out.nodes_expanded = expansions_;
  out.epsilon_final = epsilon_;
  if (source_ == target_) {
    out.path = {start_};
    out.cost = 0.0;
    out.succeeded = true;
    return out;
  }
  if (best_path_.empty()) return out;
  out.path = best_path_;
  out.cost = best_cost_;
  out.succeeded = true;
  return out;
}

PlanResult UraPlanner::run() {
  if (source_ == target_) {
    epsilon_ = 1.0;
    return incumbent();
  }
  improve_path();
  while (epsilon_ > 1.0) {
    next_pass(epsilon_ - params_.epsilon_step);
    improve_path();
  }
  return incumbent();
}

PlanResult ura_star(const ProbGrid& grid, Cell start, Cell goal, const PlannerParams& params) {
  return UraPlanner(grid, start, goal, params).run();
}

}  // namespace urplan
