// Acceptance runner. Usage:
//   acceptance [--cli PATH] [--work-dir DIR] [--workers N] [criterion...]
// Prints one "PASS n: ..." or "FAIL n: ..." line per criterion and exits
// nonzero when any criterion fails. With no criterion list, runs 1-11.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "spllns/bench.hpp"
#include "spllns/destroy.hpp"
#include "spllns/engine.hpp"
#include "spllns/generators.hpp"
#include "spllns/ilp.hpp"
#include "spllns/io.hpp"
#include "spllns/repair.hpp"
#include "spllns/training.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace spllns;
using namespace spllns::testing;

namespace {

struct Options {
  std::string cli;
  fs::path work_dir = "acceptance_work";
  std::size_t workers = 0;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

// 1. Top-k repair against exhaustive enumeration.
Verdict repair_oracle(const Options&) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  RandomIlpOptions o;
  o.min_vars = 15;
  o.max_vars = 40;
  o.min_rows = 5;
  o.max_rows = 25;
  o.max_row_len = 8;
  const std::size_t ks[] = {1, 3, 5};
  int mismatches = 0;
  int incomplete = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Assignment x;
    const Instance inst = random_ilp(rng, o, &x);
    const int n = static_cast<int>(inst.num_vars());
    const int eta = std::uniform_int_distribution<int>(1, std::min(14, n))(rng);
    const auto free = random_subset(rng, n, eta);
    const DestroySet d = DestroySet::FromIndices(n, free);
    const std::size_t k = ks[trial % 3];
    const SubProblem sub{inst, x, d};
    const SolveResult res = solve_sub_ilp(sub, SolveLimits::Unlimited(), k, false);
    if (res.status != SolveStatus::kProvedComplete) ++incomplete;
    const auto all = enumerate_feasible(sub);
    std::vector<double> expected;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) {
      expected.push_back(all[i].objective);
    }
    const auto brute = oracle_completion_objectives(inst, x, free, false);
    std::vector<double> brute_top(brute.begin(),
                                  brute.begin() + std::min(k, brute.size()));
    if (res.pool.objectives() != expected || expected != brute_top) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && incomplete == 0 && elapsed <= 60.0,
          "100 sub-problems, mismatches=" + std::to_string(mismatches) +
              ", incomplete=" + std::to_string(incomplete) +
              ", runtime=" + fmt(elapsed) + "s (limit 60s)"};
}

// 2. Sampled update with the full pool draws incumbents from the Boltzmann
// distribution exp(-c^T x / 2 tau) / Z over the feasible set.
Verdict boltzmann(const Options&) {
  const auto start = Clock::now();
  // Six variables, at most two set: 22 feasible points.
  std::vector<Constraint> rows{{{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}, 2}};
  const Instance inst("boltzmann", {1, -1, 2, 0, 1, -2}, rows);
  const auto feasible = oracle_all_feasible(inst);
  std::map<Assignment, std::size_t> index;
  for (std::size_t s = 0; s < feasible.size(); ++s) index[feasible[s].second] = s;

  const int samples = 50000;
  std::string detail = "|S|=" + std::to_string(feasible.size());
  bool pass = feasible.size() <= 30;
  for (double tau : {1.0, 5.0}) {
    EngineConfig cfg;
    cfg.eta0 = inst.num_vars();
    cfg.pool_size = feasible.size();
    cfg.update = UpdateMode::kSampled;
    cfg.accept = AcceptMode::kAlways;
    cfg.tau0 = tau;
    cfg.tau_decay = 1.0;
    cfg.include_incumbent = true;
    cfg.step_limits = SolveLimits::Unlimited();
    cfg.max_iterations = samples;
    cfg.seed = static_cast<std::uint64_t>(tau * 1000) + 17;
    RandomPolicy policy;
    const RunResult run = run_lns(inst, cfg, policy, feasible.back().second);

    std::vector<double> counts(feasible.size(), 0.0);
    for (std::size_t t = 1; t < run.trajectory.size(); ++t) {
      counts[index.at(run.trajectory[t].incumbent)] += 1.0;
    }
    double z = 0.0;
    std::vector<double> p(feasible.size());
    for (std::size_t s = 0; s < feasible.size(); ++s) {
      p[s] = std::exp(-feasible[s].first / (2.0 * tau));
      z += p[s];
    }
    double stat = 0.0;
    double min_expected = samples;
    for (std::size_t s = 0; s < feasible.size(); ++s) {
      const double e = samples * p[s] / z;
      min_expected = std::min(min_expected, e);
      stat += (counts[s] - e) * (counts[s] - e) / e;
    }
    const boost::math::chi_squared dist(static_cast<double>(feasible.size() - 1));
    const double pvalue = boost::math::cdf(boost::math::complement(dist, stat));
    pass = pass && pvalue > 0.01 && min_expected >= 5.0 &&
           static_cast<int>(run.trajectory.size()) == samples + 1;
    detail += ", tau=" + fmt(tau) + " chi2=" + fmt(stat) + " p=" + fmt(pvalue);
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed <= 300.0;
  return {pass, detail + ", runtime=" + fmt(elapsed) + "s (limit 300s)"};
}

// 3. Metric fixtures.
Verdict metrics(const Options&) {
  struct GapCase {
    double obj, best, expected;
  };
  const GapCase cases[] = {
      {10, 10, 0.0},     {-5, -5, 0.0},  {0, 0, 0.0},     {12, 10, 2.0 / 12.0},
      {-8, -10, 2.0 / 10.0}, {5, -5, 1.0}, {-3, 7, 1.0},  {0, 4, 1.0},
  };
  int bad = 0;
  for (const auto& c : cases) {
    if (std::abs(primal_gap(c.obj, c.best) - c.expected) > 1e-15) ++bad;
  }
  const std::vector<GapSample> series{{0.0, 1.0}, {5.0, 0.0}};
  const double integral = primal_integral(series, 10.0);
  const bool pass = bad == 0 && std::abs(integral - 5.0) <= 1e-12;
  return {pass, "gap fixtures failing=" + std::to_string(bad) +
                    ", integral=" + fmt(integral) + " (expected 5 +- 1e-12)"};
}

// 4. Neighborhood, temperature and sigma schedules.
Verdict schedules(const Options&) {
  bool pass = true;
  std::string detail;
  const std::size_t grown = update_neighborhood_size(100, false, 1.02, 0.5, 1000);
  pass = pass && grown == 102;
  detail += "update(100)=" + std::to_string(grown);

  const double tau0 = 1234.5;
  double tau = tau0;
  double worst_rel = 0.0;
  for (int m = 1; m <= 500; ++m) {
    tau = anneal_tau(tau, 0.9);
    const double ref = tau0 * std::pow(0.9, m);
    worst_rel = std::max(worst_rel, std::abs(tau - ref) / ref);
  }
  pass = pass && worst_rel <= 1e-9;
  detail += ", tau rel err=" + fmt(worst_rel);

  // Sigma along the no-improvement growth path from eta0 = 20.
  const std::size_t n = 1000;
  const std::size_t cap = 500;
  std::size_t eta = 20;
  std::size_t first_nonzero = 0;
  bool sigma_ok = true;
  for (int step = 0; step < 1000; ++step) {
    const double s = sigma_value(eta, 0.5, n, 1.0);
    if (eta < cap && s != 0.0) sigma_ok = false;
    if (eta >= cap && s != 1.0) sigma_ok = false;
    if (s != 0.0 && first_nonzero == 0) first_nonzero = eta;
    const std::size_t next = update_neighborhood_size(eta, false, 1.02, 0.5, n);
    if (next == eta) break;
    eta = next;
  }
  sigma_ok = sigma_ok && first_nonzero == cap;

  // The same relations inside an engine run.
  const Instance inst = gen_mvc(5, 60, 4);
  EngineConfig cfg;
  cfg.eta0 = 5;
  cfg.growth = 1.3;
  cfg.tau_decay = 0.9;
  cfg.max_iterations = 300;
  cfg.seed = 3;
  RandomPolicy policy;
  const RunResult run = run_lns(inst, cfg, policy);
  const double run_tau0 = init_tau(inst, run.trajectory.front().incumbent);
  double run_rel = 0.0;
  for (std::size_t t = 1; t < run.trajectory.size(); ++t) {
    const auto& r = run.trajectory[t];
    const double ref = run_tau0 * std::pow(0.9, static_cast<double>(t - 1));
    run_rel = std::max(run_rel, std::abs(r.tau - ref) / ref);
    const bool at_cap = static_cast<std::size_t>(r.eta) >= 30;
    if (r.sigma != (at_cap ? cfg.sigma_const : 0.0)) sigma_ok = false;
  }
  pass = pass && sigma_ok && run_rel <= 1e-9;
  detail += ", sigma switch at eta=" + std::to_string(first_nonzero) +
            " (floor(beta n)=" + std::to_string(cap) + ")" +
            ", engine tau rel err=" + fmt(run_rel) +
            (sigma_ok ? "" : ", sigma mismatch");
  return {pass, detail};
}

// 5. Local Branching against the brute-force ball optimum.
Verdict local_branching_oracle(const Options&) {
  std::mt19937_64 rng(777);
  RandomIlpOptions o;
  o.min_vars = 4;
  o.max_vars = 14;
  int mismatches = 0;
  int checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Assignment x;
    const Instance inst = random_ilp(rng, o, &x);
    const std::size_t n = inst.num_vars();
    for (std::size_t radius : {std::size_t{2}, std::size_t{3}, n}) {
      const SolveResult res =
          local_branching(inst, x, radius, SolveLimits::Unlimited(), 1);
      const double expected = oracle_ball_optimum(inst, x, radius);
      ++checks;
      if (res.pool.empty() || res.status != SolveStatus::kProvedComplete ||
          res.pool.best().objective != expected ||
          oracle_hamming(res.pool.best().x, x) > radius) {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(checks) + " (instance, radius) pairs, mismatches=" +
                               std::to_string(mismatches)};
}

// Brute-force relabeling: for every t, scan all samples.
std::vector<LabeledStep> scan_relabel(const Instance& inst,
                                      const std::vector<Assignment>& xs,
                                      const std::string& id,
                                      std::optional<int> fixed) {
  std::vector<LabeledStep> out;
  const std::size_t count = fixed ? xs.size() : xs.size() - 1;
  for (std::size_t t = 0; t < count; ++t) {
    const int r = fixed ? *fixed : static_cast<int>(oracle_hamming(xs[t], xs[t + 1]));
    if (r <= 0) continue;
    const double own = oracle_objective(inst, xs[t]);
    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      if (oracle_hamming(xs[s], xs[t]) > static_cast<std::size_t>(r)) continue;
      const double v = oracle_objective(inst, xs[s]);
      if (v >= own) continue;
      if (!best || v < oracle_objective(inst, xs[*best])) best = s;
    }
    if (!best) continue;
    std::vector<int> labels;
    for (std::size_t i = 0; i < xs[t].size(); ++i) {
      if (xs[t][i] != xs[*best][i]) labels.push_back(static_cast<int>(i));
    }
    out.push_back({id, xs[t], labels, "hindsight", r});
  }
  return out;
}

// 6. Hindsight relabeling against the quadratic scan.
Verdict hindsight_oracle(const Options&) {
  std::mt19937_64 rng(4242);
  RandomIlpOptions o;
  o.min_vars = 8;
  o.max_vars = 20;
  o.min_rows = 2;
  o.max_rows = 6;
  int mismatches = 0;
  std::size_t labels = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Assignment x;
    const Instance inst = random_ilp(rng, o, &x);
    const int n = static_cast<int>(inst.num_vars());
    const int steps = std::uniform_int_distribution<int>(2, 30)(rng);
    std::vector<Assignment> xs{x};
    while (static_cast<int>(xs.size()) < steps) {
      Assignment y = xs.back();
      for (int attempt = 0; attempt < 50; ++attempt) {
        Assignment cand = xs.back();
        const int flips = std::uniform_int_distribution<int>(0, 4)(rng);
        for (int f = 0; f < flips; ++f) cand.flip(std::uniform_int_distribution<int>(0, n - 1)(rng));
        if (oracle_feasible(inst, cand)) {
          y = cand;
          break;
        }
      }
      xs.push_back(y);
    }
    const std::string id = "traj" + std::to_string(trial);
    std::optional<int> fixed;
    if (trial % 2 == 1) fixed = std::uniform_int_distribution<int>(1, n)(rng);
    const auto got = hindsight_relabel(inst, xs, id, fixed);
    const auto want = scan_relabel(inst, xs, id, fixed);
    if (got != want) ++mismatches;
    labels += want.size();
  }
  return {mismatches == 0, "20 trajectories, " + std::to_string(labels) +
                               " labeled steps, mismatches=" + std::to_string(mismatches)};
}

// 7. BCE gradient against central differences.
Verdict gradient_check(const Options&) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 2.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    const int n = std::uniform_int_distribution<int>(5, 40)(rng);
    std::vector<double> logits(n);
    for (double& l : logits) l = nd(rng);
    const auto labels =
        random_subset(rng, n, std::uniform_int_distribution<int>(0, n)(rng));
    const auto grad = bce_gradient(logits, labels);
    for (int i = 0; i < n; ++i) {
      auto plus = logits;
      auto minus = logits;
      plus[i] += h;
      minus[i] -= h;
      const double fd = (bce_loss(plus, labels) - bce_loss(minus, labels)) / (2.0 * h);
      const double scale = std::max({std::abs(grad[i]), std::abs(fd), 1e-12});
      worst = std::max(worst, std::abs(grad[i] - fd) / scale);
    }
  }
  return {worst <= 1e-4, "20 points, max relative error=" + fmt(worst) + " (limit 1e-4)"};
}

// Random minimal cover of a covering instance (every row has negative
// coefficients and rhs -1): start from all ones and drop variables in random
// order while feasible.
Assignment random_minimal_cover(const Instance& inst, std::mt19937_64& rng) {
  const std::size_t n = inst.num_vars();
  Assignment x(n, 1);
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i : order) {
    x.set(i, 0);
    if (!oracle_feasible(inst, x)) x.set(i, 1);
  }
  return x;
}

// 8. Training recovers a planted linear scorer from labeled steps.
Verdict planted_recovery(const Options&) {
  std::vector<Instance> instances;
  for (int s = 0; s < 10; ++s) instances.push_back(gen_mvc(100 + s, 60, 4));
  for (int s = 0; s < 10; ++s) instances.push_back(gen_sc(200 + s, 40, 60, 0.08));
  std::map<std::string, const Instance*> by_id;
  for (const Instance& inst : instances) by_id[inst.name()] = &inst;

  PolicyWeights truth;
  truth.weights = {2.0, -1.5, 1.0, 0.5, -2.0, 0.0};
  truth.bias = -1.5;

  std::mt19937_64 rng(8);
  std::vector<LabeledStep> steps;
  for (int s = 0; s < 2000; ++s) {
    const Instance& inst = instances[s % instances.size()];
    LabeledStep step;
    step.instance_id = inst.name();
    step.incumbent = random_minimal_cover(inst, rng);
    step.source = "lb-demo";
    const auto logits = score_variables(truth, extract_features(inst, step.incumbent));
    for (std::size_t i = 0; i < logits.size(); ++i) {
      if (logits[i] > 0.0) step.labels.push_back(static_cast<int>(i));
    }
    step.radius = static_cast<int>(step.labels.size());
    steps.push_back(std::move(step));
  }
  const InstanceResolver resolve = [&](const std::string& id) -> const Instance& {
    return *by_id.at(id);
  };
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.seed = 1;
  const TrainReport rep = train_policy(steps, resolve, cfg);
  return {rep.validation_accuracy >= 0.95 && rep.epoch_train_loss.size() <= 30,
          "2000 steps, " + std::to_string(rep.epoch_train_loss.size()) +
              " epochs, validation accuracy=" + fmt(rep.validation_accuracy) +
              " (threshold 0.95)"};
}

// Criteria 9 and 10 share one sweep.
struct TrendData {
  std::vector<RunRow> rows;
  double greedy_vs_k3_seconds = 0.0;
  bool ran_decay_sweep = false;
};

SolverSpec trend_solver(const std::string& name, std::size_t k, bool sampled,
                        double decay) {
  SolverSpec s;
  s.name = name;
  s.policy = "random";
  s.engine.pool_size = k;
  s.engine.update = sampled ? UpdateMode::kSampled : UpdateMode::kGreedyBest;
  s.engine.accept = sampled ? AcceptMode::kAlways : AcceptMode::kImproveOnly;
  s.engine.tau_decay = decay;
  s.engine.clock = ClockKind::kWall;
  return s;
}

BenchReport run_trend_sweep(const Options& opt, const std::vector<SolverSpec>& solvers,
                            const std::string& tag) {
  const fs::path inst_dir = opt.work_dir / "mvc200";
  fs::create_directories(inst_dir);
  for (int s = 1; s <= 20; ++s) {
    const Instance inst = gen_mvc(s, 200, 8);
    const fs::path p = inst_dir / (inst.name() + ".json");
    if (!fs::exists(p)) write_instance_file(p, inst);
  }
  BenchConfig cfg;
  cfg.instance_glob = (inst_dir / "*.json").string();
  cfg.solvers = solvers;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) cfg.seeds.push_back(seed);
  cfg.cutoff_s = 30.0;
  cfg.checkpoints = {1, 5, 10, 20, 30};
  cfg.output_dir = opt.work_dir / ("trend-" + tag);
  cfg.workers = opt.workers ? opt.workers
                            : std::max(1u, std::thread::hardware_concurrency());
  return run_benchmark(cfg);
}

TrendData& trend_data(const Options& opt, bool need_decays) {
  static TrendData data;
  static bool base_done = false;
  if (!base_done) {
    const auto start = Clock::now();
    const BenchReport rep = run_trend_sweep(
        opt,
        {trend_solver("greedy-k1", 1, false, 0.9), trend_solver("sampled-k3-d0.9", 3, true, 0.9)},
        "base");
    data.greedy_vs_k3_seconds = seconds_since(start);
    data.rows = rep.rows;
    base_done = true;
  }
  if (need_decays && !data.ran_decay_sweep) {
    const BenchReport rep = run_trend_sweep(
        opt,
        {trend_solver("sampled-k3-d0.8", 3, true, 0.8),
         trend_solver("sampled-k3-d0.99", 3, true, 0.99)},
        "decays");
    data.rows.insert(data.rows.end(), rep.rows.begin(), rep.rows.end());
    data.ran_decay_sweep = true;
  }
  return data;
}

// Rows rescored against the best objective over every solver run so far.
BenchReport rescored(const TrendData& data) {
  BenchReport rep;
  rep.cutoff_s = 30.0;
  rep.rows = data.rows;
  score_rows(rep, {});
  return rep;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string failed_rows(const BenchReport& rep) {
  int failed = 0;
  for (const RunRow& r : rep.rows) failed += r.status != "ok";
  return std::to_string(failed);
}

// 9. Sampled k=3 against greedy k=1, per-instance median gap.
Verdict ablation_trend(const Options& opt, bool decays_requested) {
  const TrendData& data = trend_data(opt, decays_requested);
  const BenchReport rep = rescored(data);
  std::map<std::string, std::map<std::string, std::vector<double>>> gaps;
  for (const RunRow& r : rep.rows) gaps[r.instance][r.solver].push_back(r.primal_gap);
  int wins = 0;
  int cells = 0;
  double worst_excess = -1.0;
  for (auto& [inst, by_solver] : gaps) {
    const double g1 = median(by_solver.at("greedy-k1"));
    const double g3 = median(by_solver.at("sampled-k3-d0.9"));
    ++cells;
    wins += g3 <= g1;
    worst_excess = std::max(worst_excess, g3 - g1);
  }
  const double share = cells ? static_cast<double>(wins) / cells : 0.0;
  const bool trend = share >= 0.6 && worst_excess <= 0.02;
  const bool fast = data.greedy_vs_k3_seconds <= 7200.0;
  return {trend && fast,
          "k=3 median gap <= greedy in " + std::to_string(wins) + "/" +
              std::to_string(cells) + " instances (need 60%), worst excess=" +
              fmt(worst_excess) + " (limit 0.02), failed runs=" + failed_rows(rep) +
              ", runtime=" + fmt(data.greedy_vs_k3_seconds) + "s (limit 7200s)"};
}

// 10. Every decay beats greedy on mean primal integral with a small spread.
Verdict annealing_trend(const Options& opt) {
  const TrendData& data = trend_data(opt, true);
  const BenchReport rep = rescored(data);
  std::map<std::string, std::vector<double>> integrals;
  for (const RunRow& r : rep.rows) integrals[r.solver].push_back(r.primal_integral);
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
  };
  const double greedy = mean(integrals.at("greedy-k1"));
  std::vector<double> decay_means;
  std::string detail = "mean integral greedy=" + fmt(greedy);
  for (const char* name : {"sampled-k3-d0.8", "sampled-k3-d0.9", "sampled-k3-d0.99"}) {
    decay_means.push_back(mean(integrals.at(name)));
    detail += std::string(", ") + name + "=" + fmt(decay_means.back());
  }
  const double lo = *std::min_element(decay_means.begin(), decay_means.end());
  const double hi = *std::max_element(decay_means.begin(), decay_means.end());
  const double mean_improvement = greedy - mean(decay_means);
  const bool all_beat = hi < greedy;
  const bool tight = mean_improvement > 0.0 && hi - lo <= 0.25 * mean_improvement;
  detail += ", spread=" + fmt(hi - lo) + " (limit 25% of " + fmt(mean_improvement) + ")";
  return {all_beat && tight, detail};
}

int run_command(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return rc;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// 11. Repeated CLI solves write identical trajectories.
Verdict determinism(const Options& opt) {
  if (opt.cli.empty()) return {false, "no --cli given"};
  const fs::path dir = opt.work_dir / "determinism";
  fs::create_directories(dir);
  const fs::path inst = dir / "mvc.json";
  const std::string cli = quote(opt.cli);
  if (run_command(cli + " gen --problem mvc --nodes 80 --avg-degree 4 --seed 3 --out " +
                  quote(inst)) != 0) {
    return {false, "gen failed"};
  }
  const std::vector<std::string> variants = {
      "--iterations 150 --seed 7",
      "--iterations 150 --seed 8 --policy variable --k 1 --update greedy",
      "--iterations 40 --seed 9 --policy lb --accept metropolis",
      "--time-limit 2 --seed 10 --clock work --sigma 0.5 --decay 0.99",
  };
  int identical = 0;
  std::string failure;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path traj = dir / ("traj" + std::to_string(v) + "_" + std::to_string(rep) + ".jsonl");
      fs::remove(traj);
      if (run_command(cli + " solve --instance " + quote(inst) + " " + variants[v] +
                      " --trajectory " + quote(traj)) != 0) {
        failure = "solve failed: " + variants[v];
        break;
      }
      bytes[rep] = read_text_file(traj);
    }
    if (!failure.empty()) break;
    if (!bytes[0].empty() && bytes[0] == bytes[1]) ++identical;
  }
  const bool pass = failure.empty() && identical == static_cast<int>(variants.size());
  return {pass, failure.empty()
                    ? std::to_string(identical) + "/" + std::to_string(variants.size()) +
                          " solve variants byte-identical"
                    : failure};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::vector<int> wanted;
  CLI::App app{"acceptance criteria runner"};
  app.add_option("--cli", opt.cli, "path to the spllns executable");
  app.add_option("--work-dir", opt.work_dir, "scratch directory");
  app.add_option("--workers", opt.workers, "benchmark threads (0: hardware concurrency)");
  app.add_option("criteria", wanted, "criterion numbers")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  if (wanted.empty()) {
    for (int i = 1; i <= 11; ++i) wanted.push_back(i);
  }
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  fs::create_directories(opt.work_dir);
  const bool decays_requested =
      std::find(wanted.begin(), wanted.end(), 10) != wanted.end();

  const std::map<int, std::function<Verdict()>> criteria = {
      {1, [&] { return repair_oracle(opt); }},
      {2, [&] { return boltzmann(opt); }},
      {3, [&] { return metrics(opt); }},
      {4, [&] { return schedules(opt); }},
      {5, [&] { return local_branching_oracle(opt); }},
      {6, [&] { return hindsight_oracle(opt); }},
      {7, [&] { return gradient_check(opt); }},
      {8, [&] { return planted_recovery(opt); }},
      {9, [&] { return ablation_trend(opt, decays_requested); }},
      {10, [&] { return annealing_trend(opt); }},
      {11, [&] { return determinism(opt); }},
  };

  int failures = 0;
  for (int c : wanted) {
    Verdict v;
    try {
      v = criteria.at(c)();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << c << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
