#include "spllns/bench.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "spllns/io.hpp"

namespace spllns {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json parse_object(std::string_view text, const std::string& where) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(where, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(where, "expected an object");
  return j;
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

std::int64_t get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t get_count(const json& j, const std::string& where) {
  const std::int64_t v = get_int(j, where);
  if (v < 0) throw ParseError(where, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ParseError(where, "expected a boolean");
  return j.get<bool>();
}

void apply_engine_json(const json& j, EngineConfig& cfg, const std::string& prefix) {
  for (const auto& [key, v] : j.items()) {
    const std::string where = prefix + "/" + key;
    try {
      if (key == "eta0") cfg.eta0 = get_count(v, where);
      else if (key == "growth") cfg.growth = get_number(v, where);
      else if (key == "cap_fraction") cfg.cap_fraction = get_number(v, where);
      else if (key == "k") cfg.pool_size = get_count(v, where);
      else if (key == "update") cfg.update = parse_update_mode(get_string(v, where));
      else if (key == "accept") cfg.accept = parse_accept_mode(get_string(v, where));
      else if (key == "tau_decay") cfg.tau_decay = get_number(v, where);
      else if (key == "tau0") cfg.tau0 = get_number(v, where);
      else if (key == "sigma") cfg.sigma_const = get_number(v, where);
      else if (key == "include_incumbent") cfg.include_incumbent = get_bool(v, where);
      else if (key == "step_nodes") cfg.step_limits.max_nodes = get_int(v, where);
      else if (key == "step_time_s") cfg.step_limits.max_time_s = get_number(v, where);
      else if (key == "init_nodes") cfg.init_limits.max_nodes = get_int(v, where);
      else if (key == "max_iterations") cfg.max_iterations = get_int(v, where);
      else if (key == "time_limit_s") cfg.time_limit_s = get_number(v, where);
      else if (key == "clock") cfg.clock = parse_clock_kind(get_string(v, where));
      else if (key == "work_seconds_per_node") cfg.work_seconds_per_node = get_number(v, where);
      else if (key == "flip_window") cfg.flip_window = get_count(v, where);
      else if (key == "seed") cfg.seed = get_count(v, where);
      else throw ParseError(where, "unknown engine setting");
    } catch (const std::invalid_argument& e) {
      throw ParseError(where, e.what());
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string trajectory_name(const RunRow& row) {
  return row.instance + "__" + row.solver + "__" + std::to_string(row.seed) + ".jsonl";
}

}  // namespace

void apply_engine_overrides(std::string_view json_object, EngineConfig& cfg) {
  apply_engine_json(parse_object(json_object, ""), cfg, "");
}

std::unique_ptr<DestroyPolicy> make_policy(std::string_view kind,
                                           const EngineConfig& cfg,
                                           const Instance& inst,
                                           const PolicyWeights* weights) {
  if (kind == "random") return std::make_unique<RandomPolicy>();
  if (kind == "variable") {
    return std::make_unique<VariablePolicy>(cfg.eta0, cfg.cap_fraction, inst.num_vars());
  }
  if (kind == "lb") return std::make_unique<LocalBranchingPolicy>(cfg.step_limits);
  if (kind == "learned") {
    if (!weights) throw std::invalid_argument("learned policy needs weights");
    return std::make_unique<LearnedPolicy>(*weights);
  }
  throw std::invalid_argument("unknown destroy policy \"" + std::string(kind) + "\"");
}

void BenchConfig::validate() const {
  if (instance_glob.empty()) throw std::invalid_argument("no instance glob");
  if (solvers.empty()) throw std::invalid_argument("no solvers");
  if (seeds.empty()) throw std::invalid_argument("no seeds");
  if (!(cutoff_s > 0.0)) throw std::invalid_argument("cutoff_s must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  std::set<std::string> names;
  for (const SolverSpec& s : solvers) {
    if (s.name.empty()) throw std::invalid_argument("solver without a name");
    if (!names.insert(s.name).second) {
      throw std::invalid_argument("duplicate solver name \"" + s.name + "\"");
    }
    if (s.policy == "learned" && !s.weights_path) {
      throw std::invalid_argument("solver \"" + s.name + "\" needs weights");
    }
    EngineConfig probe = s.engine;
    probe.time_limit_s = cutoff_s;
    probe.validate();
  }
  for (double c : checkpoints) {
    if (!(c >= 0.0)) throw std::invalid_argument("checkpoints must be >= 0");
  }
}

BenchConfig parse_bench_config(std::string_view text,
                               const std::filesystem::path& base_dir) {
  const json j = parse_object(text, "");
  BenchConfig cfg;
  for (const auto& [key, v] : j.items()) {
    const std::string where = "/" + key;
    if (key == "instances") {
      cfg.instance_glob = resolve(base_dir, get_string(v, where)).string();
    } else if (key == "solvers") {
      if (!v.is_array()) throw ParseError(where, "expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string sw = where + "/" + std::to_string(i);
        if (!v[i].is_object()) throw ParseError(sw, "expected an object");
        SolverSpec spec;
        for (const auto& [skey, sv] : v[i].items()) {
          const std::string w = sw + "/" + skey;
          if (skey == "name") spec.name = get_string(sv, w);
          else if (skey == "policy") spec.policy = get_string(sv, w);
          else if (skey == "weights") spec.weights_path = resolve(base_dir, get_string(sv, w));
          else if (skey == "engine") {
            if (!sv.is_object()) throw ParseError(w, "expected an object");
            apply_engine_json(sv, spec.engine, w);
          } else {
            throw ParseError(w, "unknown solver setting");
          }
        }
        cfg.solvers.push_back(std::move(spec));
      }
    } else if (key == "seeds") {
      if (!v.is_array()) throw ParseError(where, "expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        cfg.seeds.push_back(get_count(v[i], where + "/" + std::to_string(i)));
      }
    } else if (key == "cutoff_s") {
      cfg.cutoff_s = get_number(v, where);
    } else if (key == "checkpoints") {
      if (!v.is_array()) throw ParseError(where, "expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        cfg.checkpoints.push_back(get_number(v[i], where + "/" + std::to_string(i)));
      }
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(base_dir, get_string(v, where));
    } else if (key == "workers") {
      cfg.workers = get_count(v, where);
    } else if (key == "write_trajectories") {
      cfg.write_trajectories = get_bool(v, where);
    } else if (key == "init_nodes") {
      cfg.init_limits.max_nodes = get_int(v, where);
    } else if (key == "optimum_table") {
      cfg.optimum_table = resolve(base_dir, get_string(v, where));
    } else {
      throw ParseError(where, "unknown setting");
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::filesystem::path> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (out.empty()) throw std::runtime_error("no files match \"" + pattern + "\"");
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, double> read_optimum_table(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::map<std::string, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno), "expected instance,objective");
    }
    try {
      out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno), "bad objective");
    }
  }
  return out;
}

void score_rows(BenchReport& report,
                const std::map<std::string, double>& external_optima) {
  report.best_known.clear();
  for (const RunRow& row : report.rows) {
    if (!row.best_obj) continue;
    auto it = report.best_known.find(row.instance);
    if (it == report.best_known.end()) {
      report.best_known[row.instance] = {*row.best_obj, "report"};
    } else if (*row.best_obj < it->second.objective) {
      it->second.objective = *row.best_obj;
    }
  }
  for (const auto& [name, obj] : external_optima) {
    report.best_known[name] = {obj, "table"};
  }
  for (RunRow& row : report.rows) {
    const auto it = report.best_known.find(row.instance);
    if (!row.best_obj || it == report.best_known.end()) {
      row.primal_gap = 1.0;
      row.primal_integral = report.cutoff_s;
      continue;
    }
    const double ref = it->second.objective;
    row.primal_gap = primal_gap(*row.best_obj, ref);
    const std::vector<GapSample> series = gap_series(row.improvements, ref);
    row.primal_integral = primal_integral(series, report.cutoff_s);
  }
}

BenchReport run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  const std::vector<std::filesystem::path> files = expand_glob(cfg.instance_glob);
  std::vector<Instance> instances;
  std::set<std::string> names;
  for (const auto& f : files) {
    instances.push_back(read_instance_file(f));
    if (!names.insert(instances.back().name()).second) {
      throw std::invalid_argument("duplicate instance name \"" +
                                  instances.back().name() + "\"");
    }
  }

  std::vector<std::optional<PolicyWeights>> weights(cfg.solvers.size());
  for (std::size_t s = 0; s < cfg.solvers.size(); ++s) {
    if (cfg.solvers[s].weights_path) {
      weights[s] = parse_policy_weights(read_text_file(*cfg.solvers[s].weights_path));
    }
  }

  // Shared warm start per instance.
  std::vector<std::optional<Assignment>> starts(instances.size());
  std::vector<std::string> start_errors(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    try {
      starts[i] = initial_solution(instances[i], cfg.init_limits);
    } catch (const std::exception& e) {
      start_errors[i] = e.what();
    }
  }

  BenchReport report;
  report.cutoff_s = cfg.cutoff_s;
  struct Job {
    std::size_t inst, solver;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t s = 0; s < cfg.solvers.size(); ++s) {
      for (std::uint64_t seed : cfg.seeds) jobs.push_back({i, s, seed});
    }
  }
  report.rows.resize(jobs.size());
  std::vector<std::vector<TrajectoryRecord>> trajectories(
      cfg.write_trajectories ? jobs.size() : 0);

  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const Instance& inst = instances[job.inst];
    const SolverSpec& spec = cfg.solvers[job.solver];
    RunRow& row = report.rows[j];
    row.instance = inst.name();
    row.solver = spec.name;
    row.seed = job.seed;
    if (!starts[job.inst]) {
      row.status = "error: " + start_errors[job.inst];
      return;
    }
    row.initial_obj = inst.objective_value(*starts[job.inst]);
    try {
      EngineConfig ec = spec.engine;
      ec.seed = job.seed;
      ec.time_limit_s = cfg.cutoff_s;
      ec.record_trajectory = cfg.write_trajectories;
      auto policy = make_policy(spec.policy, ec, inst,
                                weights[job.solver] ? &*weights[job.solver] : nullptr);
      RunResult res = run_lns(inst, ec, *policy, *starts[job.inst]);
      row.best_obj = res.best_objective;
      row.iterations = res.iterations;
      row.improvements = std::move(res.improvements);
      if (cfg.write_trajectories) trajectories[j] = std::move(res.trajectory);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) run_job(j);
  };
  const std::size_t n_threads = std::min(cfg.workers, std::max<std::size_t>(jobs.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::map<std::string, double> optima;
  if (cfg.optimum_table) optima = read_optimum_table(*cfg.optimum_table);
  score_rows(report, optima);

  if (!cfg.output_dir.empty()) {
    write_text_file(cfg.output_dir / "report.csv", report_csv(report));
    write_text_file(cfg.output_dir / "runs.csv", runs_csv(report));
    write_text_file(cfg.output_dir / "best_known.csv", best_known_csv(report));
    const auto summary = aggregate(report.rows, GroupBy::kSolver);
    write_text_file(cfg.output_dir / "summary.csv", summary_csv(summary));
    if (!cfg.checkpoints.empty()) {
      std::vector<GapSeriesRun> runs;
      for (const RunRow& row : report.rows) {
        GapSeriesRun r{row.instance, row.solver, row.seed, {}};
        const auto it = report.best_known.find(row.instance);
        if (row.best_obj && it != report.best_known.end()) {
          r.series = gap_series(row.improvements, it->second.objective);
        }
        runs.push_back(std::move(r));
      }
      write_text_file(cfg.output_dir / "gap_series.csv",
                      gap_series_csv(emit_gap_series(runs, cfg.checkpoints)));
    }
    if (cfg.write_trajectories) {
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (report.rows[j].status != "ok") continue;
        write_trajectory_file(cfg.output_dir / "trajectories" /
                                  trajectory_name(report.rows[j]),
                              trajectories[j]);
      }
    }
  }
  return report;
}

std::vector<SummaryRow> aggregate(std::span<const RunRow> rows, GroupBy by) {
  // Minimal gap per (instance, seed) cell.
  std::map<std::pair<std::string, std::uint64_t>, double> cell_min;
  for (const RunRow& r : rows) {
    const auto key = std::make_pair(r.instance, r.seed);
    const auto it = cell_min.find(key);
    if (it == cell_min.end() || r.primal_gap < it->second) cell_min[key] = r.primal_gap;
  }
  struct Acc {
    std::vector<double> gaps, integrals;
    std::size_t wins = 0;
  };
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const RunRow& r : rows) {
    const auto key = std::make_pair(by == GroupBy::kSolver ? std::string() : r.instance,
                                    r.solver);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.gaps.push_back(r.primal_gap);
    it->second.integrals.push_back(r.primal_integral);
    if (r.primal_gap <= cell_min[{r.instance, r.seed}]) ++it->second.wins;
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const Acc& a = groups[key];
    SummaryRow s;
    s.instance = key.first;
    s.solver = key.second;
    s.runs = a.gaps.size();
    s.mean_gap = mean(a.gaps);
    s.median_gap = median(a.gaps);
    s.mean_integral = mean(a.integrals);
    s.median_integral = median(a.integrals);
    s.win_rate = static_cast<double>(a.wins) / static_cast<double>(s.runs);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<GapSeriesPoint> emit_gap_series(std::span<const GapSeriesRun> runs,
                                            std::span<const double> checkpoints) {
  std::vector<GapSeriesPoint> out;
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<std::vector<double>>> by_group;
  for (const GapSeriesRun& run : runs) {
    std::vector<double> values;
    for (double c : checkpoints) {
      const double g = gap_at(run.series, c);
      values.push_back(g);
      out.push_back({run.instance, run.solver, run.seed, c, g});
    }
    const auto key = std::make_pair(run.instance, run.solver);
    auto [it, inserted] = by_group.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(std::move(values));
  }
  for (const auto& key : order) {
    const auto& vals = by_group[key];
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      double sum = 0.0;
      for (const auto& v : vals) sum += v[c];
      out.push_back({key.first, key.second, std::nullopt, checkpoints[c],
                     sum / static_cast<double>(vals.size())});
    }
  }
  return out;
}

std::string report_csv(const BenchReport& report) {
  std::ostringstream ss;
  ss << "instance,solver,seed,cutoff_s,primal_gap,primal_integral\n";
  for (const RunRow& r : report.rows) {
    ss << csv_field(r.instance) << ',' << csv_field(r.solver) << ',' << r.seed << ','
       << fmt(report.cutoff_s) << ',' << fmt(r.primal_gap) << ','
       << fmt(r.primal_integral) << '\n';
  }
  return ss.str();
}

std::string runs_csv(const BenchReport& report) {
  std::ostringstream ss;
  ss << "instance,solver,seed,status,initial_obj,best_obj,iterations,primal_gap,"
        "primal_integral\n";
  for (const RunRow& r : report.rows) {
    ss << csv_field(r.instance) << ',' << csv_field(r.solver) << ',' << r.seed << ','
       << csv_field(r.status) << ',' << fmt(r.initial_obj) << ','
       << (r.best_obj ? fmt(*r.best_obj) : "") << ',' << r.iterations << ','
       << fmt(r.primal_gap) << ',' << fmt(r.primal_integral) << '\n';
  }
  return ss.str();
}

std::string best_known_csv(const BenchReport& report) {
  std::ostringstream ss;
  ss << "instance,best_obj,source\n";
  for (const auto& [name, bk] : report.best_known) {
    ss << csv_field(name) << ',' << fmt(bk.objective) << ',' << bk.source << '\n';
  }
  return ss.str();
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream ss;
  ss << "instance,solver,runs,mean_gap,median_gap,mean_integral,median_integral,"
        "win_rate\n";
  for (const SummaryRow& s : rows) {
    ss << csv_field(s.instance) << ',' << csv_field(s.solver) << ',' << s.runs << ','
       << fmt(s.mean_gap) << ',' << fmt(s.median_gap) << ',' << fmt(s.mean_integral)
       << ',' << fmt(s.median_integral) << ',' << fmt(s.win_rate) << '\n';
  }
  return ss.str();
}

std::string gap_series_csv(std::span<const GapSeriesPoint> points) {
  std::ostringstream ss;
  ss << "instance,solver,seed,time_s,gap\n";
  for (const GapSeriesPoint& p : points) {
    ss << csv_field(p.instance) << ',' << csv_field(p.solver) << ','
       << (p.seed ? std::to_string(*p.seed) : std::string("mean")) << ','
       << fmt(p.time_s) << ',' << fmt(p.gap) << '\n';
  }
  return ss.str();
}

}  // namespace spllns
