// Exact repair operator: depth-first branch-and-bound over the destroyed
// variables of a binary ILP, keeping the top-k feasible completions.
//
// Node processing:
//   * row propagation on minimum activities fixes a free variable whenever one
//     of its values would push a row over its right-hand side;
//   * a node is pruned when the pool is full and its objective bound (fixed
//     part plus sum of min(0, c_i) over free variables) is >= the k-th best;
//   * branching picks the free variable with the largest |c_i| (lowest index
//     on ties) and tries the objective-improving value first.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spllns/ilp.hpp"

namespace spllns {

struct SolveLimits {
  std::optional<std::int64_t> max_nodes;
  std::optional<double> max_time_s;

  static SolveLimits Unlimited() { return {}; }
  static SolveLimits Nodes(std::int64_t n) { return {n, std::nullopt}; }
  bool unlimited() const { return !max_nodes && !max_time_s; }
};

// The sub-ILP induced by fixing every non-destroyed variable to the
// incumbent. Holds references; the referents must outlive it.
struct SubProblem {
  const Instance& base;
  const Assignment& incumbent;
  const DestroySet& destroyed;
};

struct PoolEntry {
  Assignment x;
  double objective = 0.0;
};

// Up to `capacity` distinct solutions, strictly ascending by
// (objective, assignment).
class SolutionPool {
 public:
  explicit SolutionPool(std::size_t capacity);

  // Returns true if the entry was inserted (it may evict the current worst).
  bool offer(Assignment x, double objective);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() >= capacity_; }
  const std::vector<PoolEntry>& entries() const { return entries_; }
  const PoolEntry& best() const { return entries_.front(); }
  // k-th best objective; only meaningful when full().
  double worst_objective() const { return entries_.back().objective; }
  std::vector<double> objectives() const;

 private:
  std::size_t capacity_;
  std::vector<PoolEntry> entries_;
};

enum class SolveStatus { kProvedComplete, kLimitHit };

struct SolveResult {
  SolutionPool pool;
  SolveStatus status = SolveStatus::kProvedComplete;
  std::int64_t nodes = 0;
};

// Top-k completions of the sub-ILP. With kProvedComplete the pool objectives
// are exactly the k smallest objectives of the sub-ILP's feasible set.
// Throws std::invalid_argument if the incumbent is infeasible or k < 1.
SolveResult solve_sub_ilp(const SubProblem& sub, const SolveLimits& limits,
                          std::size_t k, bool exclude_incumbent);

// Same search with every variable free; needs no feasible starting point.
SolveResult solve_from_scratch(const Instance& inst, const SolveLimits& limits,
                               std::size_t k);

// Every feasible completion, ascending by (objective, assignment). Plain
// 2^eta loop over check_feasible, kept independent of the search above.
inline constexpr std::size_t kMaxEnumerationSize = 25;
std::vector<PoolEntry> enumerate_feasible(const SubProblem& sub);

// `inst` plus the row
//   sum_{center_i = 0} x_i + sum_{center_i = 1} (1 - x_i) <= radius.
Instance with_hamming_ball(const Instance& inst, const Assignment& center,
                           std::size_t radius);

// Best solutions within Hamming distance `radius` of the incumbent.
SolveResult local_branching(const Instance& inst, const Assignment& incumbent,
                            std::size_t radius, const SolveLimits& limits,
                            std::size_t k);

}  // namespace spllns
