// Shared search scaffolding: neighborhood, edge costs, the decrease-key
// priority queue and the exact Dijkstra oracle.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "urplan/grid.hpp"

namespace urplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kSqrt2 = std::numbers::sqrt2;

/// Raised when planner parameters or scenario configuration are invalid.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlannerParams {
  double epsilon_init = 2.5;   // heuristic inflation at the first anytime pass
  double epsilon_step = 0.5;   // decrement between passes
  double alpha = 1.0;          // weight of M(s) in the anytime f-value
  double gamma_init = kSqrt2;  // replanning heuristic multiplier
  double gamma_decay = 0.8;    // applied to gamma on each tree reset
  double w_trav = 10.0;        // cost of crossing a cell with M = 0
  int scan_radius = 30;
  int stall_limit = 3;
  int grid_w = 600;  // 0 keeps the source map's native size
  int grid_h = 600;
  double threshold = 0.5;  // binarization cutoff used by the classical baselines

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// 8-connected neighbor with its geometric step length (1 or sqrt 2).
struct Neighbor {
  Cell cell;
  double step = 1.0;
};

/// Fixed-capacity neighbor list, in row-major order of the offsets.
class Neighbors {
 public:
  void push(Neighbor n) { items_[count_++] = n; }
  [[nodiscard]] const Neighbor* begin() const { return items_.data(); }
  [[nodiscard]] const Neighbor* end() const { return items_.data() + count_; }
  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] const Neighbor& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::array<Neighbor, 8> items_{};
  std::size_t count_ = 0;
};

Neighbors neighbors(Cell s, const GridShape& shape);

[[nodiscard]] inline double euclid(Cell a, Cell b) {
  return std::hypot(static_cast<double>(a.row - b.row), static_cast<double>(a.col - b.col));
}

[[nodiscard]] inline bool adjacent8(Cell a, Cell b) {
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  return std::max(dr, dc) == 1;
}

/// How a planner prices entering a cell. Every edge costs its geometric step
/// plus a penalty that depends only on the destination's probability.
struct CostModel {
  enum class Kind { Composite, Thresholded };

  Kind kind = Kind::Composite;
  double w_trav = 10.0;
  double threshold = 0.5;

  /// step + w_trav * (1 - M); a cell at exactly 0 is a revealed block.
  static CostModel composite(double w_trav) { return {Kind::Composite, w_trav, 0.5}; }
  /// Pure geometry over cells with M >= threshold; everything else blocked.
  static CostModel thresholded(double threshold) { return {Kind::Thresholded, 0.0, threshold}; }

  [[nodiscard]] double penalty(double m) const {
    if (kind == Kind::Thresholded) return m >= threshold ? 0.0 : kInf;
    return m == 0.0 ? kInf : w_trav * (1.0 - m);
  }
  [[nodiscard]] double edge(double step, double m_dest) const { return step + penalty(m_dest); }
};

/// Composite edge cost between 8-adjacent cells.
double edge_cost(Cell s, Cell s2, const ProbGrid& grid, double w_trav);

/// Sum of per-edge costs along `path` under `model`; +inf if any edge is
/// blocked. Throws std::invalid_argument on non-adjacent consecutive cells.
double path_cost(const std::vector<Cell>& path, const ProbGrid& grid, const CostModel& model);

/// Start/goal endpoints and 8-adjacency of every consecutive pair.
bool is_valid_path(const std::vector<Cell>& path, Cell start, Cell goal);

// ---------------------------------------------------------------------------

/// Lexicographic two-component priority.
struct SearchKey {
  double primary = 0.0;
  double secondary = 0.0;

  friend auto operator<=>(const SearchKey&, const SearchKey&) = default;
};

class EmptyQueueError : public std::logic_error {
 public:
  EmptyQueueError() : std::logic_error("pop/peek on an empty priority queue") {}
};

/// Binary min-heap over cell indices [0, capacity) with decrease/increase-key.
/// One entry per cell; equal keys are ordered by the smaller cell index,
/// i.e. the lowest (row, col).
class IndexedHeap {
 public:
  explicit IndexedHeap(std::size_t capacity = 0) { reset(capacity); }

  void reset(std::size_t capacity);
  void clear();

  [[nodiscard]] bool empty() const noexcept { return heap_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return heap_.size(); }
  [[nodiscard]] bool contains(std::size_t idx) const { return pos_[idx] != kAbsent; }
  [[nodiscard]] const SearchKey& key_of(std::size_t idx) const { return heap_[pos_[idx]].key; }

  /// Inserts or re-keys.
  void push(std::size_t idx, SearchKey key);
  void insert(std::size_t idx, SearchKey key) { push(idx, key); }
  void update(std::size_t idx, SearchKey key) { push(idx, key); }
  void remove(std::size_t idx);

  [[nodiscard]] std::size_t top() const;
  [[nodiscard]] SearchKey peek_min_key() const;
  std::size_t pop_min();

  /// Every queued index, in heap order.
  template <class F>
  void for_each(F&& fn) const {
    for (const auto& e : heap_) fn(e.idx);
  }

 private:
  struct Entry {
    SearchKey key;
    std::size_t idx;
  };
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  [[nodiscard]] static bool less(const Entry& a, const Entry& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.idx < b.idx;
  }
  void sift_up(std::size_t i);
  void sift_down(std::size_t i);
  void place(std::size_t i, Entry e) {
    heap_[i] = e;
    pos_[e.idx] = i;
  }

  std::vector<Entry> heap_;
  std::vector<std::size_t> pos_;
};

// ---------------------------------------------------------------------------

struct PlanResult {
  std::vector<Cell> path;  // empty on failure
  double cost = kInf;
  std::size_t nodes_expanded = 0;
  bool succeeded = false;
  double epsilon_final = 1.0;
};

/// Exact minimum-cost path under `model`; succeeded=false iff unreachable.
PlanResult dijkstra_oracle(const ProbGrid& grid, Cell start, Cell goal, const CostModel& model);
PlanResult dijkstra_oracle(const ProbGrid& grid, Cell start, Cell goal, double w_trav);

/// Single-source costs-to-`target` for every cell (backward Dijkstra).
std::vector<double> cost_to_go(const ProbGrid& grid, Cell target, const CostModel& model);

/// Follows parent links from goal back to start.
std::vector<Cell> trace_back(const std::vector<std::size_t>& parent, const GridShape& shape,
                             Cell start, Cell goal);

}  // namespace urplan
