// spllns: instance generation, single LNS runs, demonstration collection,
// hindsight relabeling, policy training and benchmark sweeps.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spllns/bench.hpp"
#include "spllns/destroy.hpp"
#include "spllns/engine.hpp"
#include "spllns/generators.hpp"
#include "spllns/io.hpp"
#include "spllns/training.hpp"

namespace fs = std::filesystem;
using namespace spllns;

namespace {

struct GenArgs {
  std::string problem;
  std::uint64_t seed = 0;
  int count = 1;
  int nodes = 200;
  double degree = 8.0;
  int items = 100;
  int bids = 500;
  int elements = 200;
  int sets = 400;
  double density = 0.05;
  std::string out_dir = ".";
  std::string out;
};

int run_gen(const GenArgs& a) {
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    Instance inst = [&] {
      if (a.problem == "mvc") return gen_mvc(seed, a.nodes, a.degree);
      if (a.problem == "mis") return gen_mis(seed, a.nodes, a.degree);
      if (a.problem == "ca") return gen_ca(seed, a.items, a.bids);
      return gen_sc(seed, a.elements, a.sets, a.density);
    }();
    const fs::path path =
        a.out.empty() ? fs::path(a.out_dir) / (inst.name() + ".json") : fs::path(a.out);
    write_instance_file(path, inst);
    std::cout << path.string() << '\n';
  }
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string config;
  std::string policy = "random";
  std::string weights;
  std::string trajectory;
  std::string solution;
  std::optional<std::size_t> eta0;
  std::optional<std::size_t> k;
  std::string update;
  std::string accept;
  std::optional<double> decay;
  std::optional<double> tau0;
  std::optional<double> sigma;
  bool include_incumbent = false;
  std::optional<std::int64_t> iterations;
  std::optional<double> time_limit;
  std::string clock;
  std::optional<double> seconds_per_node;
  std::optional<std::int64_t> step_nodes;
  std::optional<std::int64_t> init_nodes;
  std::optional<double> reference;
  std::uint64_t seed = 0;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = read_instance_file(a.instance);
  EngineConfig cfg;
  if (!a.config.empty()) apply_engine_overrides(read_text_file(a.config), cfg);
  if (a.eta0) cfg.eta0 = *a.eta0;
  if (a.k) cfg.pool_size = *a.k;
  if (!a.update.empty()) cfg.update = parse_update_mode(a.update);
  if (!a.accept.empty()) cfg.accept = parse_accept_mode(a.accept);
  if (a.decay) cfg.tau_decay = *a.decay;
  if (a.tau0) cfg.tau0 = *a.tau0;
  if (a.sigma) cfg.sigma_const = *a.sigma;
  if (a.include_incumbent) cfg.include_incumbent = true;
  if (a.iterations) cfg.max_iterations = *a.iterations;
  if (a.time_limit) cfg.time_limit_s = *a.time_limit;
  if (!a.clock.empty()) cfg.clock = parse_clock_kind(a.clock);
  if (a.seconds_per_node) cfg.work_seconds_per_node = *a.seconds_per_node;
  if (a.step_nodes) cfg.step_limits.max_nodes = *a.step_nodes;
  if (a.init_nodes) cfg.init_limits.max_nodes = *a.init_nodes;
  cfg.seed = a.seed;
  if (!cfg.max_iterations && !cfg.time_limit_s) cfg.max_iterations = 100;

  std::optional<PolicyWeights> weights;
  if (!a.weights.empty()) weights = parse_policy_weights(read_text_file(a.weights));
  auto policy = make_policy(a.policy, cfg, inst, weights ? &*weights : nullptr);
  const RunResult res = run_lns(inst, cfg, *policy);

  const fs::path traj = a.trajectory.empty()
                            ? fs::path(inst.name() + "-s" + std::to_string(a.seed) + ".jsonl")
                            : fs::path(a.trajectory);
  write_trajectory_file(traj, res.trajectory);
  if (!a.solution.empty()) write_text_file(a.solution, res.best.ToBitString() + "\n");

  std::cout << "trajectory: " << traj.string() << '\n'
            << "instance: " << inst.name() << '\n'
            << "initial_obj: " << res.initial_objective << '\n'
            << "best_obj: " << res.best_objective << '\n'
            << "iterations: " << res.iterations << '\n'
            << "nodes: " << res.nodes << '\n'
            << "solver_failures: " << res.solver_failures << '\n'
            << "termination: " << to_string(res.termination) << '\n'
            << "elapsed_s: " << res.elapsed_s << '\n';
  if (a.reference) {
    const auto series = gap_series(res.improvements, *a.reference);
    std::cout << "primal_gap: " << primal_gap(res.best_objective, *a.reference) << '\n'
              << "primal_integral: " << primal_integral(series, res.elapsed_s) << '\n';
  }
  return 0;
}

std::vector<Instance> load_instances(const std::string& glob) {
  std::vector<Instance> out;
  for (const fs::path& p : expand_glob(glob)) out.push_back(read_instance_file(p));
  return out;
}

struct CollectArgs {
  std::string instances;
  std::string out;
  std::size_t eta0 = 20;
  int steps = 20;
  std::int64_t step_nodes = 20000;
  double growth = 1.02;
  std::uint64_t seed = 0;
};

int run_collect(const CollectArgs& a) {
  const std::vector<Instance> insts = load_instances(a.instances);
  std::vector<NamedInstance> named;
  for (const Instance& inst : insts) named.push_back({inst.name(), &inst, std::nullopt});
  const auto demos = collect_lb_demos(named, a.eta0, SolveLimits::Nodes(a.step_nodes),
                                      a.steps, a.seed, a.growth);
  write_dataset_file(a.out, demos);
  std::cout << "labeled steps: " << demos.size() << '\n' << "dataset: " << a.out << '\n';
  return 0;
}

struct RelabelArgs {
  std::string instance;
  std::vector<std::string> trajectories;
  std::string out;
  std::optional<int> radius;
};

int run_relabel(const RelabelArgs& a) {
  const Instance inst = read_instance_file(a.instance);
  std::vector<LabeledStep> all;
  for (const std::string& t : a.trajectories) {
    const auto samples = trajectory_samples(read_trajectory_file(t));
    const auto steps = hindsight_relabel(inst, samples, inst.name(), a.radius);
    all.insert(all.end(), steps.begin(), steps.end());
  }
  write_dataset_file(a.out, all);
  std::cout << "labeled steps: " << all.size() << '\n' << "dataset: " << a.out << '\n';
  return 0;
}

struct TrainArgs {
  std::vector<std::string> lb_demos;
  std::vector<std::string> hindsight;
  std::string instances;
  std::string out;
  TrainConfig cfg;
};

int run_train(const TrainArgs& a) {
  const std::vector<Instance> insts = load_instances(a.instances);
  std::map<std::string, const Instance*> by_name;
  for (const Instance& inst : insts) by_name[inst.name()] = &inst;
  auto load = [](const std::vector<std::string>& files) {
    std::vector<LabeledStep> out;
    for (const std::string& f : files) {
      const auto part = read_dataset_file(f);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  };
  const auto data = build_spl_dataset(load(a.lb_demos), load(a.hindsight), a.cfg.seed);
  const InstanceResolver resolve = [&](const std::string& id) -> const Instance& {
    const auto it = by_name.find(id);
    if (it == by_name.end()) throw std::runtime_error("unknown instance \"" + id + "\"");
    return *it->second;
  };
  const TrainReport rep = train_policy(data, resolve, a.cfg);
  write_text_file(a.out, policy_weights_to_json(rep.weights) + "\n");
  std::cout << "examples: " << rep.train_size << " train, " << rep.validation_size
            << " validation\n"
            << "initial_train_loss: " << rep.initial_train_loss << '\n';
  for (std::size_t e = 0; e < rep.epoch_train_loss.size(); ++e) {
    std::cout << "epoch " << e + 1 << " train_loss: " << rep.epoch_train_loss[e] << '\n';
  }
  std::cout << "best_validation_loss: " << rep.best_validation_loss << '\n'
            << "validation_accuracy: " << rep.validation_accuracy << '\n'
            << "weights: " << a.out << '\n';
  return 0;
}

struct BenchArgs {
  std::string config;
  std::optional<std::size_t> workers;
  std::string optimum_table;
};

int run_bench(const BenchArgs& a) {
  const fs::path cfg_path(a.config);
  BenchConfig cfg = parse_bench_config(read_text_file(cfg_path), cfg_path.parent_path());
  if (a.workers) cfg.workers = *a.workers;
  if (!a.optimum_table.empty()) cfg.optimum_table = a.optimum_table;
  const BenchReport rep = run_benchmark(cfg);
  std::size_t failures = 0;
  for (const RunRow& r : rep.rows) failures += r.status != "ok";
  std::cout << summary_csv(aggregate(rep.rows, GroupBy::kSolver))
            << "runs: " << rep.rows.size() << ", failed: " << failures << '\n'
            << "report: " << (cfg.output_dir / "report.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-enhanced large neighborhood search for binary ILPs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate seeded synthetic instances");
  g->add_option("--problem", gen.problem, "mvc, mis, ca or sc")
      ->required()
      ->check(CLI::IsMember({"mvc", "mis", "ca", "sc"}));
  g->add_option("--seed", gen.seed, "Seed of the first instance");
  g->add_option("--count", gen.count, "Number of instances (seeds seed..seed+count-1)")
      ->check(CLI::PositiveNumber);
  g->add_option("--nodes", gen.nodes, "Graph nodes (mvc, mis)");
  g->add_option("--avg-degree,--degree", gen.degree, "Average degree (mvc, mis)");
  g->add_option("--items", gen.items, "Items (ca)");
  g->add_option("--bids", gen.bids, "Bids (ca)");
  g->add_option("--elements", gen.elements, "Elements (sc)");
  g->add_option("--sets", gen.sets, "Sets (sc)");
  g->add_option("--density", gen.density, "Incidence density (sc)");
  g->add_option("--out-dir", gen.out_dir, "Output directory");
  g->add_option("--out", gen.out, "Output file (single instance only)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run one LNS chain and write its trajectory");
  s->add_option("--instance", solve.instance)->required()->check(CLI::ExistingFile);
  s->add_option("--config", solve.config, "JSON object of engine settings")
      ->check(CLI::ExistingFile);
  s->add_option("--policy", solve.policy, "random, variable, lb or learned");
  s->add_option("--weights", solve.weights, "Policy weights (learned policy)");
  s->add_option("--trajectory", solve.trajectory, "Trajectory output path");
  s->add_option("--solution", solve.solution, "Write the best assignment here");
  s->add_option("--eta0", solve.eta0);
  s->add_option("--k", solve.k, "Pool size");
  s->add_option("--update", solve.update, "greedy or sampled");
  s->add_option("--accept", solve.accept, "always, metropolis or improve-only");
  s->add_option("--decay", solve.decay, "tau decay per iteration");
  s->add_option("--tau0", solve.tau0);
  s->add_option("--sigma", solve.sigma, "Destroy temperature once eta is capped");
  s->add_flag("--include-incumbent", solve.include_incumbent);
  s->add_option("--iterations", solve.iterations);
  s->add_option("--time-limit", solve.time_limit, "Seconds on the selected clock");
  s->add_option("--clock", solve.clock, "work (default) or wall");
  s->add_option("--seconds-per-node", solve.seconds_per_node, "Work clock rate");
  s->add_option("--step-nodes", solve.step_nodes, "Node limit per repair");
  s->add_option("--init-nodes", solve.init_nodes, "Node limit for the start solution");
  s->add_option("--reference", solve.reference, "Reference objective for gap output");
  s->add_option("--seed", solve.seed);

  CollectArgs collect;
  auto* c = app.add_subcommand("collect", "Collect Local Branching demonstrations");
  c->add_option("--instances", collect.instances, "Instance glob")->required();
  c->add_option("--out", collect.out, "Dataset (JSON Lines)")->required();
  c->add_option("--eta0", collect.eta0);
  c->add_option("--steps", collect.steps);
  c->add_option("--step-nodes", collect.step_nodes);
  c->add_option("--growth", collect.growth);
  c->add_option("--seed", collect.seed);

  RelabelArgs relabel;
  auto* r = app.add_subcommand("relabel", "Hindsight-relabel trajectories");
  r->add_option("--instance", relabel.instance)->required()->check(CLI::ExistingFile);
  r->add_option("--trajectory", relabel.trajectories)->required();
  r->add_option("--out", relabel.out)->required();
  r->add_option("--radius", relabel.radius, "Fixed radius instead of successor distance");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train the linear destroy policy");
  t->add_option("--data,--lb-demos", train.lb_demos, "Demonstration datasets");
  t->add_option("--hindsight", train.hindsight, "Relabeled datasets");
  t->add_option("--instances", train.instances, "Instance glob")->required();
  t->add_option("--out", train.out, "Weights output")->required();
  t->add_option("--lr", train.cfg.learning_rate);
  t->add_option("--weight-decay", train.cfg.weight_decay);
  t->add_option("--epochs", train.cfg.epochs);
  t->add_option("--batch", train.cfg.batch_size);
  t->add_option("--validation-split", train.cfg.validation_split);
  t->add_option("--seed", train.cfg.seed);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark sweep");
  b->add_option("--config", bench.config)->required()->check(CLI::ExistingFile);
  b->add_option("--workers", bench.workers);
  b->add_option("--optimum-table", bench.optimum_table)->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (!gen.out.empty() && gen.count != 1) {
    std::cerr << "error: --out requires --count 1\n";
    return 2;
  }

  try {
    if (*g) return run_gen(gen);
    if (*s) return run_solve(solve);
    if (*c) return run_collect(collect);
    if (*r) return run_relabel(relabel);
    if (*t) return run_train(train);
    if (*b) return run_bench(bench);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
