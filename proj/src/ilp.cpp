#include "spllns/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace spllns {

Assignment::Assignment(std::vector<std::uint8_t> values)
    : values_(std::move(values)) {
  for (auto& v : values_) v = v ? 1 : 0;
}

Assignment Assignment::FromBitString(std::string_view bits) {
  std::vector<std::uint8_t> values(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw std::invalid_argument("bitstring has non-binary character at " +
                                  std::to_string(i));
    }
    values[i] = bits[i] == '1';
  }
  return Assignment(std::move(values));
}

std::string Assignment::ToBitString() const {
  std::string s(values_.size(), '0');
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i]) s[i] = '1';
  }
  return s;
}

DestroySet DestroySet::FromIndices(std::size_t n, std::span<const int> indices) {
  DestroySet d(n);
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) {
      throw std::invalid_argument("destroy index " + std::to_string(i) +
                                  " out of range");
    }
    if (d.indicator_[i]) {
      throw std::invalid_argument("duplicate destroy index " +
                                  std::to_string(i));
    }
    d.indicator_[i] = 1;
  }
  d.indices_.assign(indices.begin(), indices.end());
  std::sort(d.indices_.begin(), d.indices_.end());
  return d;
}

DestroySet DestroySet::All(std::size_t n) {
  DestroySet d(n);
  std::fill(d.indicator_.begin(), d.indicator_.end(), 1);
  d.indices_.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.indices_[i] = static_cast<int>(i);
  return d;
}

Instance::Instance(std::string name, std::vector<double> objective,
                   std::vector<Constraint> constraints)
    : name_(std::move(name)),
      objective_(std::move(objective)),
      constraints_(std::move(constraints)) {
  const std::size_t n = objective_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(objective_[i])) {
      throw InvalidInstance("objective coefficient " + std::to_string(i) +
                            " is not finite");
    }
  }
  std::vector<std::size_t> count(n, 0);
  std::vector<std::size_t> seen(n, static_cast<std::size_t>(-1));
  for (std::size_t j = 0; j < constraints_.size(); ++j) {
    const Constraint& row = constraints_[j];
    const std::string where = "constraint " + std::to_string(j);
    if (row.terms.empty()) throw InvalidInstance(where + ": empty constraint");
    if (!std::isfinite(row.rhs)) {
      throw InvalidInstance(where + ": rhs is not finite");
    }
    for (const Term& t : row.terms) {
      if (t.var < 0 || static_cast<std::size_t>(t.var) >= n) {
        throw InvalidInstance(where + ": index out of range (" +
                              std::to_string(t.var) + ")");
      }
      if (!std::isfinite(t.coef)) {
        throw InvalidInstance(where + ": coefficient is not finite");
      }
      if (seen[t.var] == j) {
        throw InvalidInstance(where + ": duplicate index " +
                              std::to_string(t.var));
      }
      seen[t.var] = j;
      ++count[t.var];
    }
  }
  column_start_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    column_start_[i + 1] = column_start_[i] + count[i];
  }
  column_entries_.resize(column_start_[n]);
  std::vector<std::size_t> fill(column_start_.begin(), column_start_.end() - 1);
  for (std::size_t j = 0; j < constraints_.size(); ++j) {
    for (const Term& t : constraints_[j].terms) {
      column_entries_[fill[t.var]++] = {static_cast<int>(j), t.coef};
    }
  }
}

std::span<const ColumnEntry> Instance::column(std::size_t i) const {
  return std::span<const ColumnEntry>(column_entries_)
      .subspan(column_start_[i], column_start_[i + 1] - column_start_[i]);
}

double Instance::objective_value(const Assignment& x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < objective_.size(); ++i) {
    if (x[i]) total += objective_[i];
  }
  return total;
}

double Instance::activity(std::size_t row, const Assignment& x) const {
  double total = 0.0;
  for (const Term& t : constraints_[row].terms) {
    if (x[t.var]) total += t.coef;
  }
  return total;
}

namespace {

void require_length(const Instance& inst, const Assignment& x) {
  if (x.size() != inst.num_vars()) {
    throw std::invalid_argument(
        "assignment length " + std::to_string(x.size()) +
        " does not match instance size " + std::to_string(inst.num_vars()));
  }
}

}  // namespace

FeasibilityVerdict check_feasible(const Instance& inst, const Assignment& x) {
  require_length(inst, x);
  FeasibilityVerdict verdict;
  for (std::size_t j = 0; j < inst.num_constraints(); ++j) {
    if (inst.activity(j, x) - inst.constraint(j).rhs > kFeasibilityTolerance) {
      verdict.violated.push_back(static_cast<int>(j));
    }
  }
  return verdict;
}

Energy energy(const Instance& inst, const Assignment& x) {
  if (!check_feasible(inst, x).ok()) return Energy::Infinite();
  return Energy::Finite(inst.objective_value(x));
}

std::size_t hamming_distance(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::vector<int> diff_positions(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("diff_positions: length mismatch");
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

double primal_gap(double objective, double best_objective) {
  if (!std::isfinite(objective) || !std::isfinite(best_objective)) {
    throw std::invalid_argument("primal_gap: non-finite objective");
  }
  if (objective * best_objective < 0.0) return 1.0;
  const double scale = std::max(std::abs(objective), std::abs(best_objective));
  if (scale == 0.0) return 0.0;
  return std::min(1.0, std::abs(best_objective - objective) / scale);
}

double primal_integral(std::span<const GapSample> series, double horizon_s) {
  if (!(horizon_s >= 0.0)) {
    throw std::invalid_argument("primal_integral: negative horizon");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series[i].gap >= 0.0 && series[i].gap <= 1.0)) {
      throw std::invalid_argument("primal_integral: gap outside [0, 1]");
    }
    if (series[i].time_s < 0.0 ||
        (i > 0 && series[i].time_s < series[i - 1].time_s)) {
      throw std::invalid_argument("primal_integral: series is not sorted");
    }
  }
  double total = 0.0;
  double t = 0.0;
  double gap = 1.0;
  for (const GapSample& s : series) {
    if (s.time_s >= horizon_s) break;
    total += gap * (s.time_s - t);
    t = s.time_s;
    gap = s.gap;
  }
  total += gap * (horizon_s - t);
  return total;
}

double gap_at(std::span<const GapSample> series, double t) {
  double gap = 1.0;
  for (const GapSample& s : series) {
    if (s.time_s > t) break;
    gap = s.gap;
  }
  return gap;
}

}  // namespace spllns
