#include "spllns/destroy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "spllns/io.hpp"

namespace spllns {

FlipHistory::FlipHistory(std::size_t num_vars, std::size_t window)
    : window_(window), counts_(num_vars, 0) {}

void FlipHistory::record(std::span<const int> flipped) {
  if (window_ == 0) return;
  for (int i : flipped) ++counts_[i];
  moves_.emplace_back(flipped.begin(), flipped.end());
  if (moves_.size() > window_) {
    for (int i : moves_.front()) --counts_[i];
    moves_.pop_front();
  }
}

FeatureMatrix extract_features(const Instance& inst, const Assignment& incumbent,
                               const FlipHistory* history) {
  const std::size_t n = inst.num_vars();
  if (incumbent.size() != n) {
    throw std::invalid_argument("incumbent length does not match instance");
  }
  FeatureMatrix f;
  f.rows = n;
  f.data.assign(n * kNumFeatures, 0.0);

  double max_cost = 0.0;
  std::size_t max_degree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    max_cost = std::max(max_cost, std::abs(inst.cost(i)));
    max_degree = std::max(max_degree, inst.column(i).size());
  }

  const std::size_t m = inst.num_constraints();
  std::vector<std::uint8_t> tight(m, 0);
  std::vector<double> slack_norm(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const Constraint& row = inst.constraint(j);
    const double act = inst.activity(j, incumbent);
    const double slack = row.rhs - act;
    tight[j] = std::abs(slack) <= kFeasibilityTolerance;
    double scale = 0.0;
    for (const Term& t : row.terms) scale += std::abs(t.coef);
    slack_norm[j] = scale > 0.0 ? std::clamp(slack / scale, 0.0, 1.0) : 0.0;
  }

  const double window =
      history ? static_cast<double>(std::max<std::size_t>(history->window(), 1))
              : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = f.data.data() + i * kNumFeatures;
    row[0] = max_cost > 0.0 ? inst.cost(i) / max_cost : 0.0;
    row[1] = incumbent[i];
    const auto col = inst.column(i);
    row[2] = max_degree > 0
                 ? static_cast<double>(col.size()) / static_cast<double>(max_degree)
                 : 0.0;
    if (!col.empty()) {
      double n_tight = 0.0;
      double slack_sum = 0.0;
      for (const ColumnEntry& e : col) {
        n_tight += tight[e.row];
        slack_sum += slack_norm[e.row];
      }
      row[3] = n_tight / static_cast<double>(col.size());
      row[4] = slack_sum / static_cast<double>(col.size());
    }
    if (history) row[5] = std::min(1.0, history->count(i) / window);
  }
  return f;
}

std::string policy_weights_to_json(const PolicyWeights& w) {
  nlohmann::ordered_json j;
  j["schema"] = w.schema;
  j["bias"] = w.bias;
  j["weights"] = w.weights;
  return j.dump(2) + "\n";
}

PolicyWeights parse_policy_weights(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!j.is_object()) throw ParseError("/", "expected a JSON object");
  PolicyWeights w;
  if (!j.contains("schema") || !j["schema"].is_string()) {
    throw ParseError("/schema", "expected a string");
  }
  w.schema = j["schema"].get<std::string>();
  if (!j.contains("bias") || !j["bias"].is_number()) {
    throw ParseError("/bias", "expected a number");
  }
  w.bias = j["bias"].get<double>();
  if (!j.contains("weights") || !j["weights"].is_array()) {
    throw ParseError("/weights", "expected an array");
  }
  w.weights.clear();
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    const auto& v = j["weights"][i];
    if (!v.is_number()) {
      throw ParseError("/weights/" + std::to_string(i), "expected a number");
    }
    w.weights.push_back(v.get<double>());
  }
  if (w.schema == kFeatureSchema && w.weights.size() != kNumFeatures) {
    throw ParseError("/weights", "expected " + std::to_string(kNumFeatures) +
                                     " weights for schema " + w.schema);
  }
  return w;
}

std::vector<double> score_variables(const PolicyWeights& weights,
                                    const FeatureMatrix& features) {
  if (weights.schema != features.schema) {
    throw std::invalid_argument("feature schema mismatch: weights \"" +
                                weights.schema + "\" vs features \"" +
                                features.schema + "\"");
  }
  if (weights.weights.size() != features.dim) {
    throw std::invalid_argument("weight dimension does not match features");
  }
  std::vector<double> logits(features.rows, weights.bias);
  for (std::size_t i = 0; i < features.rows; ++i) {
    const auto row = features.row(i);
    for (std::size_t d = 0; d < features.dim; ++d) {
      logits[i] += weights.weights[d] * row[d];
    }
  }
  return logits;
}

namespace {

void check_eta(std::size_t n, std::size_t eta) {
  if (eta < 1 || eta > n) {
    throw std::invalid_argument("neighborhood size " + std::to_string(eta) +
                                " outside [1, " + std::to_string(n) + "]");
  }
}

// Indices of the `eta` largest keys, lower index first on ties.
std::vector<int> top_indices(std::span<const double> keys, std::size_t eta) {
  std::vector<int> idx(keys.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(eta),
                    idx.end(), [&](int a, int b) {
                      if (keys[a] != keys[b]) return keys[a] > keys[b];
                      return a < b;
                    });
  idx.resize(eta);
  return idx;
}

}  // namespace

DestroySet policy_destroy(std::span<const double> logits, double sigma,
                          std::size_t eta, Rng& rng) {
  const std::size_t n = logits.size();
  check_eta(n, eta);
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (sigma == 0.0) return DestroySet::FromIndices(n, top_indices(logits, eta));

  std::vector<double> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    // u in (0, 1), never 0 or 1.
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    keys[i] = logits[i] / sigma - std::log(-std::log(u));
  }
  return DestroySet::FromIndices(n, top_indices(keys, eta));
}

DestroySet random_destroy(Rng& rng, std::size_t n, std::size_t eta) {
  check_eta(n, eta);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < eta; ++i) {
    const std::size_t j = i + uniform_index(rng, n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(eta);
  return DestroySet::FromIndices(n, idx);
}

VariableNeighborhood::VariableNeighborhood(std::size_t eta0,
                                           double cap_fraction, std::size_t n)
    : eta0_(std::clamp<std::size_t>(eta0, 1, std::max<std::size_t>(n, 1))),
      cap_(std::max(static_cast<std::size_t>(std::floor(cap_fraction * n)),
                    eta0_)),
      eta_(eta0_) {}

std::size_t VariableNeighborhood::next(bool improved) {
  if (!started_) {
    started_ = true;
  } else if (improved) {
    eta_ = eta0_;
  } else {
    eta_ = std::min(eta_ + eta0_, cap_);
  }
  return eta_;
}

LbDestroyResult lb_destroy(const Instance& inst, const Assignment& incumbent,
                           std::size_t eta, const SolveLimits& limits,
                           Rng& rng) {
  const std::size_t n = inst.num_vars();
  check_eta(n, eta);
  const SolveResult lb = local_branching(inst, incumbent, eta, limits, 1);
  if (lb.pool.empty() ||
      !(lb.pool.best().objective < inst.objective_value(incumbent))) {
    return {random_destroy(rng, n, eta), incumbent, false};
  }
  const Assignment& solution = lb.pool.best().x;
  std::vector<int> chosen = diff_positions(incumbent, solution);
  if (chosen.size() < eta) {
    std::vector<int> rest;
    rest.reserve(n - chosen.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (incumbent[i] == solution[i]) rest.push_back(static_cast<int>(i));
    }
    const std::size_t pad = eta - chosen.size();
    for (std::size_t i = 0; i < pad; ++i) {
      const std::size_t j = i + uniform_index(rng, rest.size() - i);
      std::swap(rest[i], rest[j]);
      chosen.push_back(rest[i]);
    }
  }
  return {DestroySet::FromIndices(n, chosen), solution, true};
}

DestroySet RandomPolicy::select(const DestroyContext& ctx) {
  return random_destroy(ctx.rng, ctx.inst.num_vars(),
                        std::min(ctx.eta, ctx.inst.num_vars()));
}

DestroySet VariablePolicy::select(const DestroyContext& ctx) {
  const std::size_t eta = cycle_.next(ctx.improved_last);
  return random_destroy(ctx.rng, ctx.inst.num_vars(),
                        std::min(eta, ctx.inst.num_vars()));
}

DestroySet LocalBranchingPolicy::select(const DestroyContext& ctx) {
  return lb_destroy(ctx.inst, ctx.incumbent,
                    std::min(ctx.eta, ctx.inst.num_vars()), limits_, ctx.rng)
      .destroyed;
}

DestroySet LearnedPolicy::select(const DestroyContext& ctx) {
  const FeatureMatrix features =
      extract_features(ctx.inst, ctx.incumbent, &ctx.history);
  const std::vector<double> logits = score_variables(weights_, features);
  return policy_destroy(logits, ctx.sigma,
                        std::min(ctx.eta, ctx.inst.num_vars()), ctx.rng);
}

}  // namespace spllns
