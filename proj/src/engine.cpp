#include "spllns/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace spllns {

UpdateMode parse_update_mode(std::string_view s) {
  if (s == "greedy" || s == "greedy-best") return UpdateMode::kGreedyBest;
  if (s == "sampled") return UpdateMode::kSampled;
  throw std::invalid_argument("unknown update mode \"" + std::string(s) + "\"");
}

AcceptMode parse_accept_mode(std::string_view s) {
  if (s == "always") return AcceptMode::kAlways;
  if (s == "metropolis") return AcceptMode::kMetropolis;
  if (s == "improve-only") return AcceptMode::kImproveOnly;
  throw std::invalid_argument("unknown accept mode \"" + std::string(s) + "\"");
}

ClockKind parse_clock_kind(std::string_view s) {
  if (s == "wall") return ClockKind::kWall;
  if (s == "work") return ClockKind::kWork;
  throw std::invalid_argument("unknown clock \"" + std::string(s) + "\"");
}

std::string_view to_string(UpdateMode m) {
  return m == UpdateMode::kGreedyBest ? "greedy-best" : "sampled";
}

std::string_view to_string(AcceptMode m) {
  switch (m) {
    case AcceptMode::kAlways: return "always";
    case AcceptMode::kMetropolis: return "metropolis";
    case AcceptMode::kImproveOnly: return "improve-only";
  }
  return "?";
}

std::string_view to_string(ClockKind c) {
  return c == ClockKind::kWall ? "wall" : "work";
}

std::string_view to_string(Termination t) {
  return t == Termination::kIterationLimit ? "iteration-limit" : "time-limit";
}

void EngineConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid engine config: " + what);
  };
  if (eta0 < 1) fail("eta0 must be >= 1");
  if (!(growth >= 1.0)) fail("growth must be >= 1");
  if (!(cap_fraction > 0.0 && cap_fraction < 1.0)) fail("cap_fraction must be in (0, 1)");
  if (pool_size < 1) fail("pool_size must be >= 1");
  if (!(tau_decay > 0.0 && tau_decay <= 1.0)) fail("tau_decay must be in (0, 1]");
  if (tau0 && !(*tau0 > 0.0)) fail("tau0 must be > 0");
  if (!(sigma_const >= 0.0)) fail("sigma_const must be >= 0");
  if (!max_iterations && !time_limit_s) fail("no iteration or time budget");
  if (max_iterations && *max_iterations < 0) fail("max_iterations must be >= 0");
  if (time_limit_s && !(*time_limit_s >= 0.0)) fail("time_limit_s must be >= 0");
  if (clock == ClockKind::kWork && !(work_seconds_per_node > 0.0)) {
    fail("work_seconds_per_node must be > 0");
  }
}

std::vector<GapSample> gap_series(std::span<const ObjectiveSample> samples,
                                  double reference_objective) {
  std::vector<GapSample> out;
  out.reserve(samples.size());
  for (const ObjectiveSample& s : samples) {
    out.push_back({s.time_s, primal_gap(s.objective, reference_objective)});
  }
  return out;
}

Assignment initial_solution(const Instance& inst, const SolveLimits& limits) {
  SolveResult res = solve_from_scratch(inst, limits, 1);
  if (res.pool.empty()) {
    throw NoFeasibleSolution(res.status == SolveStatus::kProvedComplete
                                 ? "instance is infeasible"
                                 : "no feasible solution within limits");
  }
  return res.pool.best().x;
}

std::size_t update_neighborhood_size(std::size_t eta, bool improved,
                                     double growth, double cap_fraction,
                                     std::size_t n) {
  if (improved) return eta;
  const auto cap = static_cast<std::size_t>(std::floor(cap_fraction * n));
  // The relative nudge keeps e.g. 1.02 * 50 from rounding up to 52.
  const auto grown = static_cast<std::size_t>(
      std::ceil(growth * static_cast<double>(eta) * (1.0 - 1e-12)));
  return std::min(std::max(eta, std::min(grown, cap)), std::max(n, eta));
}

double init_tau(const Instance& inst, const Assignment& x0) {
  return std::abs(inst.objective_value(x0)) + 1.0;
}

double anneal_tau(double tau, double decay) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  return decay * tau;
}

double sigma_value(std::size_t eta, double cap_fraction, std::size_t n,
                   double sigma_const) {
  const auto cap = static_cast<std::size_t>(std::floor(cap_fraction * n));
  return eta >= cap ? sigma_const : 0.0;
}

std::size_t sample_from_pool(const SolutionPool& pool, double tau, Rng& rng) {
  if (pool.empty()) throw std::invalid_argument("cannot sample an empty pool");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const auto& entries = pool.entries();
  const double lowest = entries.front().objective;
  std::vector<double> weights(entries.size());
  double total = 0.0;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    weights[j] = std::exp(-(entries[j].objective - lowest) / (2.0 * tau));
    total += weights[j];
  }
  double u = uniform01(rng) * total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (u < weights[j]) return j;
    u -= weights[j];
  }
  return 0;
}

bool accept(double current_obj, double candidate_obj, double tau,
            AcceptMode mode, Rng& rng) {
  switch (mode) {
    case AcceptMode::kAlways:
      return true;
    case AcceptMode::kImproveOnly:
      return candidate_obj < current_obj;
    case AcceptMode::kMetropolis:
      if (candidate_obj <= current_obj) return true;
      return uniform01(rng) < std::exp((current_obj - candidate_obj) / tau);
  }
  return false;
}

namespace {

// Smallest temperature the loop anneals down to.
constexpr double kMinTau = 1e-300;

class RunClock {
 public:
  RunClock(ClockKind kind, double seconds_per_node)
      : kind_(kind),
        per_node_(seconds_per_node),
        start_(std::chrono::steady_clock::now()) {}

  double elapsed(std::int64_t nodes) const {
    if (kind_ == ClockKind::kWork) return static_cast<double>(nodes) * per_node_;
    const std::chrono::duration<double> d =
        std::chrono::steady_clock::now() - start_;
    return d.count();
  }

 private:
  ClockKind kind_;
  double per_node_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunResult run_lns(const Instance& inst, const EngineConfig& cfg,
                  DestroyPolicy& policy, const Assignment& start) {
  cfg.validate();
  if (start.size() != inst.num_vars() || !check_feasible(inst, start).ok()) {
    throw std::invalid_argument("start solution is infeasible");
  }
  const std::size_t n = inst.num_vars();
  RunClock clock(cfg.clock, cfg.work_seconds_per_node);
  Rng rng(cfg.seed);

  Assignment x = start;
  double x_obj = inst.objective_value(x);
  RunResult result;
  result.best = x;
  result.best_objective = x_obj;
  result.initial_objective = x_obj;
  result.improvements.push_back({0.0, x_obj});

  std::size_t eta = std::clamp<std::size_t>(cfg.eta0, 1, std::max<std::size_t>(n, 1));
  double tau = cfg.tau0 ? *cfg.tau0 : init_tau(inst, x);
  double sigma = sigma_value(eta, cfg.cap_fraction, n, cfg.sigma_const);
  bool improved_last = false;
  FlipHistory history(n, cfg.flip_window);

  if (cfg.record_trajectory) {
    result.trajectory.push_back({0, 0.0, x, x_obj, static_cast<int>(eta), tau,
                                 sigma, {}, {}, x, true, x_obj});
  }

  std::int64_t t = 0;
  std::int64_t nodes = 0;
  // Work-clock budget in nodes; the small nudge absorbs division rounding.
  std::int64_t node_budget = std::numeric_limits<std::int64_t>::max();
  if (cfg.clock == ClockKind::kWork && cfg.time_limit_s) {
    node_budget = static_cast<std::int64_t>(
        std::floor(*cfg.time_limit_s / cfg.work_seconds_per_node + 1e-9));
  }
  while (true) {
    const double now = clock.elapsed(nodes);
    if (cfg.max_iterations && t >= *cfg.max_iterations) {
      result.termination = Termination::kIterationLimit;
      break;
    }
    const bool out_of_time =
        cfg.time_limit_s && (cfg.clock == ClockKind::kWork ? nodes >= node_budget
                                                           : now >= *cfg.time_limit_s);
    if (out_of_time) {
      result.termination = Termination::kTimeLimit;
      break;
    }
    if (n == 0) {
      result.termination = Termination::kIterationLimit;
      break;
    }

    sigma = sigma_value(eta, cfg.cap_fraction, n, cfg.sigma_const);
    const DestroyContext ctx{inst, x, eta, sigma, improved_last, history, rng};
    const DestroySet destroyed = policy.select(ctx);

    SolveLimits limits = cfg.step_limits;
    if (cfg.clock == ClockKind::kWork) {
      limits.max_time_s.reset();
      if (cfg.time_limit_s) {
        const std::int64_t remaining = node_budget - nodes;
        limits.max_nodes =
            limits.max_nodes ? std::min(*limits.max_nodes, remaining) : remaining;
      }
    } else if (cfg.time_limit_s) {
      const double remaining = *cfg.time_limit_s - now;
      limits.max_time_s =
          limits.max_time_s ? std::min(*limits.max_time_s, remaining) : remaining;
    }

    SolutionPool pool(cfg.pool_size);
    try {
      SolveResult solved = solve_sub_ilp({inst, x, destroyed}, limits,
                                         cfg.pool_size, !cfg.include_incumbent);
      nodes += solved.nodes;
      pool = std::move(solved.pool);
    } catch (const std::exception&) {
      ++result.solver_failures;
    }
    ++t;

    const bool improved = !pool.empty() && pool.best().objective < x_obj;
    if (!pool.empty() && pool.best().objective < result.best_objective) {
      result.best = pool.best().x;
      result.best_objective = pool.best().objective;
      result.improvements.push_back({clock.elapsed(nodes), result.best_objective});
    }

    bool accepted = false;
    Assignment chosen = x;
    if (!pool.empty()) {
      const std::size_t pick = cfg.update == UpdateMode::kGreedyBest
                                   ? 0
                                   : sample_from_pool(pool, tau, rng);
      const PoolEntry& candidate = pool.entries()[pick];
      chosen = candidate.x;
      accepted = accept(x_obj, candidate.objective, tau, cfg.accept, rng);
      if (accepted) {
        history.record(diff_positions(x, candidate.x));
        x = candidate.x;
        x_obj = candidate.objective;
      }
    }

    if (cfg.record_trajectory) {
      TrajectoryRecord rec;
      rec.t = t;
      rec.time_s = clock.elapsed(nodes);
      rec.incumbent = x;
      rec.obj = x_obj;
      rec.eta = static_cast<int>(eta);
      rec.tau = tau;
      rec.sigma = sigma;
      rec.destroyed.assign(destroyed.indices().begin(), destroyed.indices().end());
      rec.pool_objs = pool.objectives();
      rec.chosen = std::move(chosen);
      rec.accepted = accepted;
      rec.best_obj = result.best_objective;
      result.trajectory.push_back(std::move(rec));
    }

    tau = std::max(anneal_tau(tau, cfg.tau_decay), kMinTau);
    eta = update_neighborhood_size(eta, improved, cfg.growth, cfg.cap_fraction, n);
    improved_last = improved;
  }

  result.iterations = t;
  result.nodes = nodes;
  result.elapsed_s = clock.elapsed(nodes);
  result.improvements.push_back({result.elapsed_s, result.best_objective});
  return result;
}

RunResult run_lns(const Instance& inst, const EngineConfig& cfg,
                  DestroyPolicy& policy) {
  return run_lns(inst, cfg, policy, initial_solution(inst, cfg.init_limits));
}

std::vector<Assignment> trajectory_samples(
    std::span<const TrajectoryRecord> trajectory) {
  std::vector<Assignment> out;
  out.reserve(trajectory.size());
  for (const TrajectoryRecord& r : trajectory) out.push_back(r.incumbent);
  return out;
}

}  // namespace spllns
