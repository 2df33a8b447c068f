// Binary ILP data model: min c^T x  s.t.  A x <= b,  x in {0,1}^n.
//
// All constraints are stored in canonical "<=" form. Instances are immutable
// once constructed and may be shared read-only between concurrent runs.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spllns {

// Tolerance on a_j . x - b_j when deciding feasibility.
inline constexpr double kFeasibilityTolerance = 1e-6;

// Raised when an instance violates a structural invariant.
class InvalidInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A 0/1 value per variable. Ordered lexicographically (index 0 first), which
// is the tie-break used by solution pools and enumeration.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n, std::uint8_t fill = 0)
      : values_(n, fill ? 1 : 0) {}
  explicit Assignment(std::vector<std::uint8_t> values);

  // Parses a string of '0'/'1' characters.
  static Assignment FromBitString(std::string_view bits);
  std::string ToBitString() const;

  std::size_t size() const { return values_.size(); }
  std::uint8_t operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, std::uint8_t v) { values_[i] = v ? 1 : 0; }
  void flip(std::size_t i) { values_[i] ^= 1; }
  std::span<const std::uint8_t> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

// The indicator of destroyed (freed) variables and its size eta.
class DestroySet {
 public:
  DestroySet() = default;
  explicit DestroySet(std::size_t n) : indicator_(n, 0) {}

  // Indices may be given in any order; duplicates and out-of-range indices
  // throw std::invalid_argument.
  static DestroySet FromIndices(std::size_t n, std::span<const int> indices);
  static DestroySet All(std::size_t n);

  std::size_t num_vars() const { return indicator_.size(); }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t i) const { return indicator_[i] != 0; }
  // Destroyed indices, ascending.
  std::span<const int> indices() const { return indices_; }
  std::span<const std::uint8_t> indicator() const { return indicator_; }

  friend bool operator==(const DestroySet&, const DestroySet&) = default;

 private:
  std::vector<std::uint8_t> indicator_;
  std::vector<int> indices_;
};

struct Term {
  int var = 0;
  double coef = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

// sum_k coef_k * x_{var_k} <= rhs
struct Constraint {
  std::vector<Term> terms;
  double rhs = 0.0;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Column view entry: variable appears in `row` with coefficient `coef`.
struct ColumnEntry {
  int row = 0;
  double coef = 0.0;
};

class Instance {
 public:
  // Validates: every index in [0, n), no empty row, no repeated index within a
  // row, all numbers finite. Throws InvalidInstance otherwise.
  Instance(std::string name, std::vector<double> objective,
           std::vector<Constraint> constraints);

  const std::string& name() const { return name_; }
  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::span<const double> objective() const { return objective_; }
  double cost(std::size_t i) const { return objective_[i]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(std::size_t j) const { return constraints_[j]; }
  std::span<const ColumnEntry> column(std::size_t i) const;

  // c^T x, summed in index order.
  double objective_value(const Assignment& x) const;
  double activity(std::size_t row, const Assignment& x) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name_ == b.name_ && a.objective_ == b.objective_ &&
           a.constraints_ == b.constraints_;
  }

 private:
  std::string name_;
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
  std::vector<std::size_t> column_start_;
  std::vector<ColumnEntry> column_entries_;
};

struct FeasibilityVerdict {
  std::vector<int> violated;  // ascending constraint indices
  bool ok() const { return violated.empty(); }
};

// Throws std::invalid_argument on a length mismatch.
FeasibilityVerdict check_feasible(const Instance& inst, const Assignment& x);

// E(x) = c^T x on feasible points, +infinity elsewhere.
class Energy {
 public:
  static Energy Finite(double v) { return Energy(v); }
  static Energy Infinite() {
    return Energy(std::numeric_limits<double>::infinity());
  }
  bool is_finite() const {
    return value_ != std::numeric_limits<double>::infinity();
  }
  double value() const { return value_; }
  friend auto operator<=>(const Energy&, const Energy&) = default;

 private:
  explicit Energy(double v) : value_(v) {}
  double value_;
};

Energy energy(const Instance& inst, const Assignment& x);

std::size_t hamming_distance(const Assignment& a, const Assignment& b);

// Indices where a and b differ, ascending.
std::vector<int> diff_positions(const Assignment& a, const Assignment& b);

// Normalized distance between an objective and the best-known objective.
// Symmetric, always in [0, 1]; (0, 0) maps to 0. Throws on non-finite input.
double primal_gap(double objective, double best_objective);

struct GapSample {
  double time_s = 0.0;
  double gap = 1.0;
};

// Integral over [0, horizon] of the right-continuous step function through
// `series`. The gap is 1 before the first sample; samples after the horizon
// are ignored. Throws std::invalid_argument on unsorted times, gaps outside
// [0, 1] or a negative horizon.
double primal_integral(std::span<const GapSample> series, double horizon_s);

// Gap of a step series at time t (1 before the first sample).
double gap_at(std::span<const GapSample> series, double t);

}  // namespace spllns
