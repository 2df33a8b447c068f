// Destroy operators: uniform random, variable neighborhood, Local Branching
// expert, and a learned mean-field policy over per-variable linear scores.

#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spllns/ilp.hpp"
#include "spllns/repair.hpp"
#include "spllns/rng.hpp"

namespace spllns {

// Feature schema "linear-v1", one row per variable:
//   0 objective coefficient / max |c|
//   1 incumbent value
//   2 constraint degree / max degree
//   3 fraction of the variable's rows that are tight at the incumbent
//   4 mean normalized slack of those rows, slack / sum |a_j|, clipped to [0,1]
//   5 recent flips / window
inline constexpr std::string_view kFeatureSchema = "linear-v1";
inline constexpr std::size_t kNumFeatures = 6;

struct FeatureMatrix {
  std::string schema{kFeatureSchema};
  std::size_t dim = kNumFeatures;
  std::size_t rows = 0;
  std::vector<double> data;  // row-major rows x dim

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data).subspan(i * dim, dim);
  }
};

// Per-variable flip counts over the last `window` accepted moves.
class FlipHistory {
 public:
  FlipHistory(std::size_t num_vars, std::size_t window);

  void record(std::span<const int> flipped);
  std::size_t window() const { return window_; }
  int count(std::size_t i) const { return counts_[i]; }
  std::span<const int> counts() const { return counts_; }

 private:
  std::size_t window_;
  std::deque<std::vector<int>> moves_;
  std::vector<int> counts_;
};

FeatureMatrix extract_features(const Instance& inst, const Assignment& incumbent,
                               const FlipHistory* history = nullptr);

struct PolicyWeights {
  std::string schema{kFeatureSchema};
  double bias = 0.0;
  std::vector<double> weights = std::vector<double>(kNumFeatures, 0.0);

  friend bool operator==(const PolicyWeights&, const PolicyWeights&) = default;
};

// {"schema": id, "bias": number, "weights": [number...]}
std::string policy_weights_to_json(const PolicyWeights& w);
PolicyWeights parse_policy_weights(std::string_view text);

// logits_i = w . feat_i + bias. Throws std::invalid_argument on a schema or
// dimension mismatch.
std::vector<double> score_variables(const PolicyWeights& weights,
                                    const FeatureMatrix& features);

// Exactly `eta` variables. sigma > 0: sampling without replacement with
// weights exp(logit_i / sigma) (Gumbel-top-eta). sigma == 0: top-eta logits,
// lower index first on ties.
DestroySet policy_destroy(std::span<const double> logits, double sigma,
                          std::size_t eta, Rng& rng);

// Uniform eta-subset of [0, n). Throws std::invalid_argument unless
// 1 <= eta <= n.
DestroySet random_destroy(Rng& rng, std::size_t n, std::size_t eta);

// Neighborhood size cycling through eta0, 2 eta0, 3 eta0, ... capped at
// floor(cap_fraction * n), back to eta0 after an improvement.
class VariableNeighborhood {
 public:
  VariableNeighborhood(std::size_t eta0, double cap_fraction, std::size_t n);

  // Size for the next destroy step given the outcome of the previous one.
  std::size_t next(bool improved);
  std::size_t current() const { return eta_; }

 private:
  std::size_t eta0_;
  std::size_t cap_;
  std::size_t eta_;
  bool started_ = false;
};

struct LbDestroyResult {
  DestroySet destroyed;
  Assignment solution;  // LB solution, or the incumbent when none is better
  bool improved = false;
};

// Positions where the Local Branching solution differs from the incumbent,
// padded with uniformly drawn extra indices up to eta. Falls back to a
// uniform eta-subset when nothing strictly better is found.
LbDestroyResult lb_destroy(const Instance& inst, const Assignment& incumbent,
                           std::size_t eta, const SolveLimits& limits, Rng& rng);

// What the engine knows when it asks for a destroy set.
struct DestroyContext {
  const Instance& inst;
  const Assignment& incumbent;
  std::size_t eta;
  double sigma;
  bool improved_last;
  const FlipHistory& history;
  Rng& rng;
};

class DestroyPolicy {
 public:
  virtual ~DestroyPolicy() = default;
  virtual std::string_view name() const = 0;
  virtual DestroySet select(const DestroyContext& ctx) = 0;
};

class RandomPolicy final : public DestroyPolicy {
 public:
  std::string_view name() const override { return "random"; }
  DestroySet select(const DestroyContext& ctx) override;
};

// Ignores the engine's eta and keeps its own cycle.
class VariablePolicy final : public DestroyPolicy {
 public:
  VariablePolicy(std::size_t eta0, double cap_fraction, std::size_t n)
      : cycle_(eta0, cap_fraction, n) {}
  std::string_view name() const override { return "variable"; }
  DestroySet select(const DestroyContext& ctx) override;

 private:
  VariableNeighborhood cycle_;
};

class LocalBranchingPolicy final : public DestroyPolicy {
 public:
  explicit LocalBranchingPolicy(SolveLimits limits) : limits_(limits) {}
  std::string_view name() const override { return "lb"; }
  DestroySet select(const DestroyContext& ctx) override;

 private:
  SolveLimits limits_;
};

class LearnedPolicy final : public DestroyPolicy {
 public:
  explicit LearnedPolicy(PolicyWeights weights) : weights_(std::move(weights)) {}
  std::string_view name() const override { return "learned"; }
  DestroySet select(const DestroyContext& ctx) override;

 private:
  PolicyWeights weights_;
};

}  // namespace spllns
