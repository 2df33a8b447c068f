// Supervision for the destroy policy and its training.
//
// Labels are variable index sets I: the positions where a better solution in
// the neighborhood of an incumbent differs from it. They come either from
// Local Branching demonstrations or from hindsight relabeling of a finished
// LNS trajectory.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spllns/destroy.hpp"
#include "spllns/ilp.hpp"
#include "spllns/repair.hpp"

namespace spllns {

struct LabeledStep {
  std::string instance_id;
  Assignment incumbent;
  std::vector<int> labels;  // ascending
  std::string source;       // "lb-demo" or "hindsight"
  int radius = 0;

  friend bool operator==(const LabeledStep&, const LabeledStep&) = default;
};

// {"inst": id, "x": bitstring, "labels": [index...], "source": str,
//  "radius": int}, one per line.
std::string labeled_step_to_json(const LabeledStep& s);
LabeledStep parse_labeled_step(std::string_view line);
void write_dataset_file(const std::filesystem::path& path,
                        std::span<const LabeledStep> steps);
std::vector<LabeledStep> read_dataset_file(const std::filesystem::path& path);

struct NamedInstance {
  std::string id;
  const Instance* instance;
  std::optional<Assignment> start;  // default: initial_solution under step_limits
};

// Greedy LNS driven by lb_destroy on each instance; every step whose LB
// solution improves the incumbent yields one label and becomes the next
// incumbent. `growth` enlarges the radius after a non-improving step (capped
// at cap_fraction * n); collection stops early once the radius can no longer
// grow.
std::vector<LabeledStep> collect_lb_demos(std::span<const NamedInstance> instances,
                                          std::size_t eta0,
                                          const SolveLimits& step_limits,
                                          int steps, std::uint64_t seed,
                                          double growth = 1.0,
                                          double cap_fraction = 0.5);

// For each sample x(t) with successor x(t+1), the relabel target is the
// lowest-objective sample within Hamming radius r(t) of x(t), where r(t) is
// d_H(x(t), x(t+1)) unless `fixed_radius` is given. x(t) itself is kept
// unless some sample is strictly better; among strictly better samples the
// earliest wins ties. Steps with radius 0 or no better sample are skipped.
// With `fixed_radius` the last sample is relabeled as well.
std::vector<LabeledStep> hindsight_relabel(const Instance& inst,
                                           std::span<const Assignment> samples,
                                           const std::string& instance_id,
                                           std::optional<int> fixed_radius = {});

// L = -sum_{i in I} log s(l_i) - sum_{i not in I} log(1 - s(l_i)),
// s the logistic function. Labels must be valid indices.
double bce_loss(std::span<const double> logits, std::span<const int> labels);
// dL/dl_i = s(l_i) - [i in I].
std::vector<double> bce_gradient(std::span<const double> logits,
                                 std::span<const int> labels);

struct TrainConfig {
  double learning_rate = 1e-3;
  double weight_decay = 5e-5;
  int epochs = 30;
  std::size_t batch_size = 4;
  double validation_split = 0.2;
  double max_positive_weight = 50.0;
  std::uint64_t seed = 0;
};

struct TrainingExample {
  FeatureMatrix features;
  std::vector<int> labels;
};

// Per-example training objective: BCE with positives up-weighted by
// (n - |I|) / |I| clamped to [1, max_positive_weight].
struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_grad;  // one per feature
  double bias_grad = 0.0;
};
LossAndGradient example_loss(const PolicyWeights& w, const TrainingExample& ex,
                             double max_positive_weight);

struct TrainReport {
  PolicyWeights weights;  // best validation loss
  double initial_train_loss = 0.0;
  std::vector<double> epoch_train_loss;
  double best_validation_loss = 0.0;
  double validation_accuracy = 0.0;  // per-variable, at the returned weights
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

// Minibatch gradient descent with decoupled weight decay. Throws
// std::invalid_argument on empty data and std::runtime_error on a NaN loss.
TrainReport train_policy(std::span<const TrainingExample> data,
                         const TrainConfig& cfg);

// Builds features for each step; `resolve` maps an instance id to its
// instance.
using InstanceResolver = std::function<const Instance&(const std::string&)>;
std::vector<TrainingExample> make_examples(std::span<const LabeledStep> steps,
                                           const InstanceResolver& resolve);
TrainReport train_policy(std::span<const LabeledStep> steps,
                         const InstanceResolver& resolve, const TrainConfig& cfg);

// Fraction of variables whose label matches sign(logit).
double label_accuracy(const PolicyWeights& w,
                      std::span<const TrainingExample> data);

// Concatenation deduplicated on (instance, incumbent) with hindsight records
// preferred, then shuffled with `seed`.
std::vector<LabeledStep> build_spl_dataset(std::span<const LabeledStep> lb_demos,
                                           std::span<const LabeledStep> hindsight,
                                           std::uint64_t seed);

}  // namespace spllns
