#include "urplan/search_core.hpp"

#include <algorithm>
#include <string>

namespace urplan {

void PlannerParams::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!std::isfinite(epsilon_init) || epsilon_init < 1.0) {
    throw ConfigError("epsilon_init must be >= 1");
  }
  if (!std::isfinite(epsilon_step) || epsilon_step <= 0.0) {
    throw ConfigError("epsilon_step must be > 0");
  }
  if (!finite_nonneg(alpha)) throw ConfigError("alpha must be finite and >= 0");
  if (!std::isfinite(gamma_init) || gamma_init <= 0.0) throw ConfigError("gamma_init must be > 0");
  if (!(gamma_decay > 0.0 && gamma_decay <= 1.0)) throw ConfigError("gamma_decay must be in (0,1]");
  if (!finite_nonneg(w_trav)) throw ConfigError("w_trav must be finite and >= 0");
  if (scan_radius < 1) throw ConfigError("scan_radius must be >= 1");
  if (stall_limit < 1) throw ConfigError("stall_limit must be >= 1");
  if (grid_w < 0 || grid_h < 0 || grid_w == 1 || grid_h == 1) {
    throw ConfigError("grid_w/grid_h must be 0 (native) or >= 2");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0,1)");
}

Neighbors neighbors(Cell s, const GridShape& shape) {
  Neighbors out;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Cell n{s.row + dr, s.col + dc};
      if (!shape.in_bounds(n)) continue;
      out.push({n, (dr != 0 && dc != 0) ? kSqrt2 : 1.0});
    }
  }
  return out;
}

double edge_cost(Cell s, Cell s2, const ProbGrid& grid, double w_trav) {
  const double step = (s.row != s2.row && s.col != s2.col) ? kSqrt2 : 1.0;
  return CostModel::composite(w_trav).edge(step, grid.at(s2));
}

double path_cost(const std::vector<Cell>& path, const ProbGrid& grid, const CostModel& model) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Cell a = path[i - 1];
    const Cell b = path[i];
    if (!adjacent8(a, b)) {
      throw std::invalid_argument("path cells " + to_string(a) + " and " + to_string(b) +
                                  " are not adjacent");
    }
    const double step = (a.row != b.row && a.col != b.col) ? kSqrt2 : 1.0;
    total += model.edge(step, grid.at(b));
  }
  return total;
}

bool is_valid_path(const std::vector<Cell>& path, Cell start, Cell goal) {
  if (path.empty() || path.front() != start || path.back() != goal) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!adjacent8(path[i - 1], path[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

void IndexedHeap::reset(std::size_t capacity) {
  heap_.clear();
  pos_.assign(capacity, kAbsent);
}

void IndexedHeap::clear() {
  for (const auto& e : heap_) pos_[e.idx] = kAbsent;
  heap_.clear();
}

void IndexedHeap::push(std::size_t idx, SearchKey key) {
  if (pos_[idx] == kAbsent) {
    heap_.push_back({key, idx});
    pos_[idx] = heap_.size() - 1;
    sift_up(heap_.size() - 1);
    return;
  }
  const std::size_t i = pos_[idx];
  const SearchKey old = heap_[i].key;
  heap_[i].key = key;
  if (key < old) {
    sift_up(i);
  } else {
    sift_down(i);
  }
}

void IndexedHeap::remove(std::size_t idx) {
  const std::size_t i = pos_[idx];
  if (i == kAbsent) return;
  pos_[idx] = kAbsent;
  const Entry last = heap_.back();
  heap_.pop_back();
  if (i == heap_.size()) return;
  place(i, last);
  sift_up(i);
  sift_down(pos_[last.idx]);
}

std::size_t IndexedHeap::top() const {
  if (heap_.empty()) throw EmptyQueueError();
  return heap_.front().idx;
}

SearchKey IndexedHeap::peek_min_key() const {
  if (heap_.empty()) throw EmptyQueueError();
  return heap_.front().key;
}

std::size_t IndexedHeap::pop_min() {
  const std::size_t idx = top();
  remove(idx);
  return idx;
}

void IndexedHeap::sift_up(std::size_t i) {
  const Entry e = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!less(e, heap_[parent])) break;
    place(i, heap_[parent]);
    i = parent;
  }
  place(i, e);
}

void IndexedHeap::sift_down(std::size_t i) {
  const Entry e = heap_[i];
  const std::size_t n = heap_.size();
  while (true) {
    std::size_t child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
    if (!less(heap_[child], e)) break;
    place(i, heap_[child]);
    i = child;
  }
  place(i, e);
}

// ---------------------------------------------------------------------------

std::vector<Cell> trace_back(const std::vector<std::size_t>& parent, const GridShape& shape,
                             Cell start, Cell goal) {
  std::vector<Cell> path;
  std::size_t cur = shape.index(goal);
  const std::size_t s = shape.index(start);
  const std::size_t none = static_cast<std::size_t>(-1);
  while (true) {
    path.push_back(shape.cell(cur));
    if (cur == s) break;
    cur = parent[cur];
    if (cur == none || path.size() > shape.size()) return {};
  }
  std::reverse(path.begin(), path.end());
  return path;
}

PlanResult dijkstra_oracle(const ProbGrid& grid, Cell start, Cell goal, const CostModel& model) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal)) {
    throw std::invalid_argument("dijkstra_oracle: endpoint out of bounds");
  }
  const GridShape& shape = grid.shape();
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<double> dist(shape.size(), kInf);
  std::vector<std::size_t> parent(shape.size(), none);
  IndexedHeap open(shape.size());

  PlanResult out;
  const std::size_t s = shape.index(start);
  const std::size_t g = shape.index(goal);
  dist[s] = 0.0;
  open.push(s, {0.0, 0.0});
  while (!open.empty()) {
    const std::size_t u = open.pop_min();
    ++out.nodes_expanded;
    if (u == g) break;
    const Cell cu = shape.cell(u);
    for (const auto& [nb, step] : neighbors(cu, shape)) {
      const double c = model.edge(step, grid.at(nb));
      if (!std::isfinite(c)) continue;
      const std::size_t v = shape.index(nb);
      if (dist[u] + c < dist[v]) {
        dist[v] = dist[u] + c;
        parent[v] = u;
        open.push(v, {dist[v], 0.0});
      }
    }
  }
  if (!std::isfinite(dist[g])) return out;
  out.path = trace_back(parent, shape, start, goal);
  out.cost = path_cost(out.path, grid, model);
  out.succeeded = true;
  return out;
}

PlanResult dijkstra_oracle(const ProbGrid& grid, Cell start, Cell goal, double w_trav) {
  return dijkstra_oracle(grid, start, goal, CostModel::composite(w_trav));
}

std::vector<double> cost_to_go(const ProbGrid& grid, Cell target, const CostModel& model) {
  const GridShape& shape = grid.shape();
  std::vector<double> dist(shape.size(), kInf);
  IndexedHeap open(shape.size());
  const std::size_t t = shape.index(target);
  dist[t] = 0.0;
  open.push(t, {0.0, 0.0});
  while (!open.empty()) {
    const std::size_t u = open.pop_min();
    const Cell cu = shape.cell(u);
    // Edge p -> u is priced by u's probability.
    const double pen = model.penalty(grid.at(cu));
    if (!std::isfinite(pen)) continue;
    for (const auto& [nb, step] : neighbors(cu, shape)) {
      const std::size_t p = shape.index(nb);
      const double d = dist[u] + step + pen;
      if (d < dist[p]) {
        dist[p] = d;
        open.push(p, {d, 0.0});
      }
    }
  }
  return dist;
}

}  // namespace urplan
