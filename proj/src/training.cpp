#include "spllns/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spllns/engine.hpp"
#include "spllns/io.hpp"
#include "spllns/rng.hpp"

namespace spllns {

std::string labeled_step_to_json(const LabeledStep& s) {
  nlohmann::ordered_json j;
  j["inst"] = s.instance_id;
  j["x"] = s.incumbent.ToBitString();
  j["labels"] = s.labels;
  j["source"] = s.source;
  j["radius"] = s.radius;
  return j.dump();
}

LabeledStep parse_labeled_step(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line.begin(), line.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) {
      throw ParseError(std::string("/") + key, "missing field");
    }
    return j[key];
  };
  LabeledStep s;
  const auto& inst = require("inst");
  const auto& x = require("x");
  const auto& labels = require("labels");
  const auto& source = require("source");
  const auto& radius = require("radius");
  if (!inst.is_string()) throw ParseError("/inst", "expected a string");
  if (!x.is_string()) throw ParseError("/x", "expected a bitstring");
  if (!labels.is_array()) throw ParseError("/labels", "expected an array");
  if (!source.is_string()) throw ParseError("/source", "expected a string");
  if (!radius.is_number_integer()) throw ParseError("/radius", "expected an integer");
  s.instance_id = inst.get<std::string>();
  try {
    s.incumbent = Assignment::FromBitString(x.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError("/x", e.what());
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_number_integer()) {
      throw ParseError("/labels/" + std::to_string(i), "expected an integer");
    }
    const int idx = labels[i].get<int>();
    if (idx < 0 || static_cast<std::size_t>(idx) >= s.incumbent.size()) {
      throw ParseError("/labels/" + std::to_string(i), "index out of range");
    }
    s.labels.push_back(idx);
  }
  std::sort(s.labels.begin(), s.labels.end());
  s.source = source.get<std::string>();
  s.radius = radius.get<int>();
  return s;
}

void write_dataset_file(const std::filesystem::path& path,
                        std::span<const LabeledStep> steps) {
  std::ostringstream ss;
  for (const LabeledStep& s : steps) ss << labeled_step_to_json(s) << '\n';
  write_text_file(path, ss.str());
}

std::vector<LabeledStep> read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<LabeledStep> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(parse_labeled_step(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + " " + e.location(),
                       e.message());
    }
  }
  return out;
}

std::vector<LabeledStep> collect_lb_demos(std::span<const NamedInstance> instances,
                                          std::size_t eta0,
                                          const SolveLimits& step_limits,
                                          int steps, std::uint64_t seed,
                                          double growth, double cap_fraction) {
  std::vector<LabeledStep> out;
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const Instance& inst = *instances[idx].instance;
    const std::size_t n = inst.num_vars();
    if (n == 0) continue;
    Rng rng(derive_seed(seed, idx));
    Assignment x = instances[idx].start ? *instances[idx].start
                                        : initial_solution(inst, step_limits);
    std::size_t eta = std::clamp<std::size_t>(eta0, 1, n);
    for (int step = 0; step < steps; ++step) {
      const LbDestroyResult lb = lb_destroy(inst, x, eta, step_limits, rng);
      if (lb.improved) {
        out.push_back({instances[idx].id, x, diff_positions(x, lb.solution),
                       "lb-demo", static_cast<int>(eta)});
        x = lb.solution;
        continue;
      }
      const std::size_t next =
          update_neighborhood_size(eta, false, growth, cap_fraction, n);
      if (next == eta) break;
      eta = next;
    }
  }
  return out;
}

std::vector<LabeledStep> hindsight_relabel(const Instance& inst,
                                           std::span<const Assignment> samples,
                                           const std::string& instance_id,
                                           std::optional<int> fixed_radius) {
  std::vector<LabeledStep> out;
  std::vector<double> objs;
  objs.reserve(samples.size());
  for (const Assignment& x : samples) objs.push_back(inst.objective_value(x));

  const std::size_t last = fixed_radius ? samples.size()
                                        : (samples.empty() ? 0 : samples.size() - 1);
  for (std::size_t t = 0; t < last; ++t) {
    const int radius = fixed_radius
                           ? *fixed_radius
                           : static_cast<int>(hamming_distance(samples[t], samples[t + 1]));
    if (radius <= 0) continue;
    std::size_t target = t;
    double target_obj = objs[t];
    for (std::size_t s = 0; s < samples.size(); ++s) {
      if (objs[s] < target_obj &&
          hamming_distance(samples[s], samples[t]) <= static_cast<std::size_t>(radius)) {
        target = s;
        target_obj = objs[s];
      }
    }
    if (target == t) continue;
    out.push_back({instance_id, samples[t], diff_positions(samples[t], samples[target]),
                   "hindsight", radius});
  }
  return out;
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<std::uint8_t> label_indicator(std::size_t n, std::span<const int> labels) {
  std::vector<std::uint8_t> y(n, 0);
  for (int i : labels) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) {
      throw std::invalid_argument("label index out of range");
    }
    y[i] = 1;
  }
  return y;
}

}  // namespace

double bce_loss(std::span<const double> logits, std::span<const int> labels) {
  const auto y = label_indicator(logits.size(), labels);
  double loss = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    loss += y[i] ? softplus(-logits[i]) : softplus(logits[i]);
  }
  return loss;
}

std::vector<double> bce_gradient(std::span<const double> logits,
                                 std::span<const int> labels) {
  const auto y = label_indicator(logits.size(), labels);
  std::vector<double> g(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) g[i] = logistic(logits[i]) - y[i];
  return g;
}

LossAndGradient example_loss(const PolicyWeights& w, const TrainingExample& ex,
                             double max_positive_weight) {
  const std::size_t n = ex.features.rows;
  LossAndGradient out;
  out.weight_grad.assign(ex.features.dim, 0.0);
  if (n == 0) return out;
  const std::vector<double> logits = score_variables(w, ex.features);
  const auto y = label_indicator(n, ex.labels);
  const double positives = static_cast<double>(ex.labels.size());
  const double pos_weight =
      positives > 0.0
          ? std::clamp((static_cast<double>(n) - positives) / positives, 1.0,
                       max_positive_weight)
          : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = y[i] ? pos_weight : 1.0;
    out.loss += weight * (y[i] ? softplus(-logits[i]) : softplus(logits[i]));
    const double dlogit = weight * (logistic(logits[i]) - y[i]);
    const auto row = ex.features.row(i);
    for (std::size_t d = 0; d < ex.features.dim; ++d) {
      out.weight_grad[d] += dlogit * row[d];
    }
    out.bias_grad += dlogit;
  }
  return out;
}

namespace {

double mean_loss(const PolicyWeights& w, std::span<const TrainingExample> data,
                 std::span<const std::size_t> subset, double max_pos) {
  if (subset.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i : subset) total += example_loss(w, data[i], max_pos).loss;
  return total / static_cast<double>(subset.size());
}

double subset_accuracy(const PolicyWeights& w, std::span<const TrainingExample> data,
                       std::span<const std::size_t> subset) {
  double correct = 0.0;
  double total = 0.0;
  for (std::size_t idx : subset) {
    const TrainingExample& ex = data[idx];
    const auto logits = score_variables(w, ex.features);
    const auto y = label_indicator(logits.size(), ex.labels);
    for (std::size_t i = 0; i < logits.size(); ++i) {
      correct += (logits[i] > 0.0) == (y[i] == 1);
      total += 1.0;
    }
  }
  return total > 0.0 ? correct / total : 0.0;
}

}  // namespace

double label_accuracy(const PolicyWeights& w, std::span<const TrainingExample> data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return subset_accuracy(w, data, all);
}

TrainReport train_policy(std::span<const TrainingExample> data,
                         const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("no training data");
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(cfg.learning_rate >= 0.0) || !(cfg.weight_decay >= 0.0)) {
    throw std::invalid_argument("rates must be non-negative");
  }
  const std::size_t dim = data.front().features.dim;
  const std::string schema = data.front().features.schema;
  for (const TrainingExample& ex : data) {
    if (ex.features.dim != dim || ex.features.schema != schema) {
      throw std::invalid_argument("training examples mix feature schemas");
    }
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = static_cast<std::size_t>(
      std::floor(cfg.validation_split * static_cast<double>(data.size())));
  if (n_val >= data.size()) n_val = data.size() - 1;
  const std::vector<std::size_t> val(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> train(order.begin() + n_val, order.end());
  const std::span<const std::size_t> selection_set =
      val.empty() ? std::span<const std::size_t>(train) : std::span<const std::size_t>(val);

  PolicyWeights w;
  w.schema = schema;
  w.weights.assign(dim, 0.0);

  TrainReport report;
  report.train_size = train.size();
  report.validation_size = val.size();
  report.initial_train_loss = mean_loss(w, data, train, cfg.max_positive_weight);
  report.best_validation_loss =
      mean_loss(w, data, selection_set, cfg.max_positive_weight);
  report.weights = w;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(train.begin(), train.end(), rng);
    for (std::size_t start = 0; start < train.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(train.size(), start + cfg.batch_size);
      std::vector<double> grad(dim, 0.0);
      double bias_grad = 0.0;
      for (std::size_t b = start; b < stop; ++b) {
        const LossAndGradient g = example_loss(w, data[train[b]], cfg.max_positive_weight);
        for (std::size_t d = 0; d < dim; ++d) grad[d] += g.weight_grad[d];
        bias_grad += g.bias_grad;
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (std::size_t d = 0; d < dim; ++d) {
        w.weights[d] -= cfg.learning_rate * grad[d] * inv;
        w.weights[d] -= cfg.learning_rate * cfg.weight_decay * w.weights[d];
      }
      w.bias -= cfg.learning_rate * bias_grad * inv;
    }
    const double train_loss = mean_loss(w, data, train, cfg.max_positive_weight);
    const double sel_loss = mean_loss(w, data, selection_set, cfg.max_positive_weight);
    if (std::isnan(train_loss) || std::isnan(sel_loss)) {
      throw std::runtime_error("training loss became NaN at epoch " +
                               std::to_string(epoch + 1));
    }
    report.epoch_train_loss.push_back(train_loss);
    if (sel_loss < report.best_validation_loss) {
      report.best_validation_loss = sel_loss;
      report.weights = w;
    }
  }
  report.validation_accuracy = subset_accuracy(report.weights, data, selection_set);
  return report;
}

std::vector<TrainingExample> make_examples(std::span<const LabeledStep> steps,
                                           const InstanceResolver& resolve) {
  std::vector<TrainingExample> out;
  out.reserve(steps.size());
  for (const LabeledStep& s : steps) {
    const Instance& inst = resolve(s.instance_id);
    out.push_back({extract_features(inst, s.incumbent, nullptr), s.labels});
  }
  return out;
}

TrainReport train_policy(std::span<const LabeledStep> steps,
                         const InstanceResolver& resolve, const TrainConfig& cfg) {
  const std::vector<TrainingExample> examples = make_examples(steps, resolve);
  return train_policy(examples, cfg);
}

std::vector<LabeledStep> build_spl_dataset(std::span<const LabeledStep> lb_demos,
                                           std::span<const LabeledStep> hindsight,
                                           std::uint64_t seed) {
  std::vector<LabeledStep> out;
  std::set<std::pair<std::string, std::string>> seen;
  auto add = [&](const LabeledStep& s) {
    if (seen.emplace(s.instance_id, s.incumbent.ToBitString()).second) {
      out.push_back(s);
    }
  };
  for (const LabeledStep& s : hindsight) add(s);
  for (const LabeledStep& s : lb_demos) add(s);
  Rng rng(seed);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace spllns
