#include "spllns/repair.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace spllns {

SolutionPool::SolutionPool(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("pool capacity must be >= 1");
  entries_.reserve(capacity_ + 1);
}

bool SolutionPool::offer(Assignment x, double objective) {
  auto less = [](const PoolEntry& e, const std::pair<double, const Assignment*>& key) {
    if (e.objective != key.first) return e.objective < key.first;
    return e.x < *key.second;
  };
  const std::pair<double, const Assignment*> key{objective, &x};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, less);
  if (it != entries_.end() && it->objective == objective && it->x == x) {
    return false;
  }
  if (full() && it == entries_.end()) return false;
  entries_.insert(it, PoolEntry{std::move(x), objective});
  if (entries_.size() > capacity_) entries_.pop_back();
  return true;
}

std::vector<double> SolutionPool::objectives() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const PoolEntry& e : entries_) out.push_back(e.objective);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

class TreeSearch {
 public:
  TreeSearch(const Instance& inst, const Assignment& base,
             std::span<const int> free_vars, const SolveLimits& limits,
             std::size_t k, const Assignment* excluded)
      : inst_(inst),
        limits_(limits),
        pool_(k),
        excluded_(excluded),
        start_(Clock::now()) {
    const std::size_t n = inst.num_vars();
    value_.resize(n);
    for (std::size_t i = 0; i < n; ++i) value_[i] = static_cast<std::int8_t>(base[i]);
    for (int i : free_vars) value_[i] = -1;

    order_.assign(free_vars.begin(), free_vars.end());
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      const double ca = std::abs(inst.cost(a));
      const double cb = std::abs(inst.cost(b));
      if (ca != cb) return ca > cb;
      return a < b;
    });

    fixed_obj_ = 0.0;
    free_neg_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (value_[i] < 0) {
        free_neg_ += std::min(0.0, inst.cost(i));
      } else if (value_[i] == 1) {
        fixed_obj_ += inst.cost(i);
      }
    }

    const std::size_t m = inst.num_constraints();
    min_activity_.assign(m, 0.0);
    in_queue_.assign(m, 0);
    std::vector<std::uint8_t> relevant(m, 0);
    for (int i : free_vars) {
      for (const ColumnEntry& e : inst.column(i)) relevant[e.row] = 1;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!relevant[j]) continue;
      double act = 0.0;
      for (const Term& t : inst.constraint(j).terms) {
        if (value_[t.var] < 0) {
          act += std::min(0.0, t.coef);
        } else if (value_[t.var] == 1) {
          act += t.coef;
        }
      }
      min_activity_[j] = act;
      enqueue(static_cast<int>(j));
    }
  }

  SolveResult run() {
    if (propagate()) dfs(0);
    SolveResult result{std::move(pool_),
                       stopped_ ? SolveStatus::kLimitHit
                                : SolveStatus::kProvedComplete,
                       nodes_};
    return result;
  }

 private:
  void enqueue(int row) {
    if (!in_queue_[row]) {
      in_queue_[row] = 1;
      queue_.push_back(row);
    }
  }

  void fix(int var, std::int8_t v) {
    value_[var] = v;
    var_trail_.push_back(var);
    const double c = inst_.cost(var);
    free_neg_ -= std::min(0.0, c);
    if (v) fixed_obj_ += c;
    for (const ColumnEntry& e : inst_.column(var)) {
      const double delta = (v ? e.coef : 0.0) - std::min(0.0, e.coef);
      if (delta != 0.0) {
        row_trail_.emplace_back(e.row, min_activity_[e.row]);
        min_activity_[e.row] += delta;
        enqueue(e.row);
      }
    }
  }

  // Returns false on a conflict. The queue is empty on return.
  bool propagate() {
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const int row = queue_[head];
      in_queue_[row] = 0;
      const Constraint& c = inst_.constraint(row);
      const double slack = c.rhs + kFeasibilityTolerance - min_activity_[row];
      if (slack < 0.0) {
        for (std::size_t r = head + 1; r < queue_.size(); ++r) {
          in_queue_[queue_[r]] = 0;
        }
        queue_.clear();
        return false;
      }
      for (const Term& t : c.terms) {
        if (value_[t.var] >= 0 || std::abs(t.coef) <= slack) continue;
        fix(t.var, t.coef > 0.0 ? 0 : 1);
      }
    }
    queue_.clear();
    return true;
  }

  void undo(std::size_t var_mark, std::size_t row_mark) {
    while (row_trail_.size() > row_mark) {
      min_activity_[row_trail_.back().first] = row_trail_.back().second;
      row_trail_.pop_back();
    }
    while (var_trail_.size() > var_mark) {
      value_[var_trail_.back()] = -1;
      var_trail_.pop_back();
    }
  }

  bool out_of_budget() {
    if (limits_.max_nodes && nodes_ >= *limits_.max_nodes) return true;
    if (limits_.max_time_s && (nodes_ & 127) == 0) {
      const std::chrono::duration<double> elapsed = Clock::now() - start_;
      if (elapsed.count() >= *limits_.max_time_s) return true;
    }
    return false;
  }

  void record_leaf() {
    std::vector<std::uint8_t> bits(value_.begin(), value_.end());
    Assignment x(std::move(bits));
    if (excluded_ && x == *excluded_) return;
    const double obj = inst_.objective_value(x);
    pool_.offer(std::move(x), obj);
  }

  void dfs(std::size_t pos) {
    if (out_of_budget()) {
      stopped_ = true;
      return;
    }
    ++nodes_;
    if (pool_.full() && fixed_obj_ + free_neg_ >= pool_.worst_objective()) {
      return;
    }
    while (pos < order_.size() && value_[order_[pos]] >= 0) ++pos;
    if (pos == order_.size()) {
      record_leaf();
      return;
    }
    const int var = order_[pos];
    const std::int8_t first = inst_.cost(var) < 0.0 ? 1 : 0;
    for (int branch = 0; branch < 2; ++branch) {
      const std::int8_t v = branch == 0 ? first : static_cast<std::int8_t>(1 - first);
      const std::size_t var_mark = var_trail_.size();
      const std::size_t row_mark = row_trail_.size();
      const double saved_obj = fixed_obj_;
      const double saved_neg = free_neg_;
      fix(var, v);
      if (propagate()) dfs(pos + 1);
      undo(var_mark, row_mark);
      fixed_obj_ = saved_obj;
      free_neg_ = saved_neg;
      if (stopped_) return;
    }
  }

  const Instance& inst_;
  SolveLimits limits_;
  SolutionPool pool_;
  const Assignment* excluded_;
  Clock::time_point start_;

  std::vector<std::int8_t> value_;  // -1 while free
  std::vector<int> order_;
  std::vector<double> min_activity_;
  std::vector<std::uint8_t> in_queue_;
  std::vector<int> queue_;
  std::vector<int> var_trail_;
  std::vector<std::pair<int, double>> row_trail_;
  double fixed_obj_ = 0.0;
  double free_neg_ = 0.0;
  std::int64_t nodes_ = 0;
  bool stopped_ = false;
};

void require_feasible_incumbent(const Instance& inst, const Assignment& x) {
  if (x.size() != inst.num_vars()) {
    throw std::invalid_argument("incumbent length does not match instance");
  }
  if (!check_feasible(inst, x).ok()) {
    throw std::invalid_argument("incumbent is infeasible");
  }
}

}  // namespace

SolveResult solve_sub_ilp(const SubProblem& sub, const SolveLimits& limits,
                          std::size_t k, bool exclude_incumbent) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  require_feasible_incumbent(sub.base, sub.incumbent);
  if (sub.destroyed.num_vars() != sub.base.num_vars()) {
    throw std::invalid_argument("destroy set length does not match instance");
  }
  TreeSearch search(sub.base, sub.incumbent, sub.destroyed.indices(), limits, k,
                    exclude_incumbent ? &sub.incumbent : nullptr);
  return search.run();
}

SolveResult solve_from_scratch(const Instance& inst, const SolveLimits& limits,
                               std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const Assignment zeros(inst.num_vars());
  const DestroySet all = DestroySet::All(inst.num_vars());
  TreeSearch search(inst, zeros, all.indices(), limits, k, nullptr);
  return search.run();
}

std::vector<PoolEntry> enumerate_feasible(const SubProblem& sub) {
  const std::span<const int> free_vars = sub.destroyed.indices();
  if (free_vars.size() > kMaxEnumerationSize) {
    throw std::invalid_argument("destroyed set too large to enumerate (" +
                                std::to_string(free_vars.size()) + " > " +
                                std::to_string(kMaxEnumerationSize) + ")");
  }
  std::vector<PoolEntry> out;
  Assignment x = sub.incumbent;
  const std::uint64_t count = std::uint64_t{1} << free_vars.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t b = 0; b < free_vars.size(); ++b) {
      x.set(free_vars[b], (mask >> b) & 1);
    }
    if (check_feasible(sub.base, x).ok()) {
      out.push_back({x, sub.base.objective_value(x)});
    }
  }
  std::sort(out.begin(), out.end(), [](const PoolEntry& a, const PoolEntry& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return a.x < b.x;
  });
  return out;
}

Instance with_hamming_ball(const Instance& inst, const Assignment& center,
                           std::size_t radius) {
  if (center.size() != inst.num_vars()) {
    throw std::invalid_argument("ball center length does not match instance");
  }
  std::vector<Constraint> rows = inst.constraints();
  if (inst.num_vars() > 0) {
    Constraint ball;
    double ones = 0.0;
    ball.terms.reserve(inst.num_vars());
    for (std::size_t i = 0; i < inst.num_vars(); ++i) {
      ball.terms.push_back({static_cast<int>(i), center[i] ? -1.0 : 1.0});
      ones += center[i];
    }
    ball.rhs = static_cast<double>(radius) - ones;
    rows.push_back(std::move(ball));
  }
  return Instance(inst.name(), std::vector<double>(inst.objective().begin(),
                                                   inst.objective().end()),
                  std::move(rows));
}

SolveResult local_branching(const Instance& inst, const Assignment& incumbent,
                            std::size_t radius, const SolveLimits& limits,
                            std::size_t k) {
  require_feasible_incumbent(inst, incumbent);
  const DestroySet all = DestroySet::All(inst.num_vars());
  if (radius >= inst.num_vars()) {
    return solve_sub_ilp({inst, incumbent, all}, limits, k, false);
  }
  const Instance ball = with_hamming_ball(inst, incumbent, radius);
  return solve_sub_ilp({ball, incumbent, all}, limits, k, false);
}

}  // namespace spllns
