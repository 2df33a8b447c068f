// Sampling-enhanced LNS loop.
//
// Each iteration: destroy -> top-k repair -> update the best-so-far from the
// pool minimum -> draw a candidate from the pool with probability
// proportional to exp(-obj / (2 tau)) (or take the pool head in greedy mode)
// -> accept -> anneal tau, refresh sigma, grow eta when nothing improved.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spllns/destroy.hpp"
#include "spllns/ilp.hpp"
#include "spllns/io.hpp"
#include "spllns/repair.hpp"
#include "spllns/rng.hpp"

namespace spllns {

enum class UpdateMode { kGreedyBest, kSampled };
enum class AcceptMode { kAlways, kMetropolis, kImproveOnly };
// kWork measures time as explored branch-and-bound nodes times a fixed cost
// per node, which makes time-limited runs reproducible.
enum class ClockKind { kWall, kWork };

UpdateMode parse_update_mode(std::string_view s);
AcceptMode parse_accept_mode(std::string_view s);
ClockKind parse_clock_kind(std::string_view s);
std::string_view to_string(UpdateMode m);
std::string_view to_string(AcceptMode m);
std::string_view to_string(ClockKind c);

struct EngineConfig {
  std::size_t eta0 = 20;
  double growth = 1.02;
  double cap_fraction = 0.5;
  std::size_t pool_size = 3;
  UpdateMode update = UpdateMode::kSampled;
  AcceptMode accept = AcceptMode::kAlways;
  double tau_decay = 0.9;
  std::optional<double> tau0;  // |c^T x0| + 1 when unset
  double sigma_const = 1.0;
  bool include_incumbent = false;
  SolveLimits step_limits = SolveLimits::Nodes(5000);
  SolveLimits init_limits = SolveLimits::Nodes(20000);
  std::optional<std::int64_t> max_iterations;
  std::optional<double> time_limit_s;
  ClockKind clock = ClockKind::kWork;
  double work_seconds_per_node = 1e-6;
  std::size_t flip_window = 10;
  bool record_trajectory = true;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument.
  void validate() const;
};

class NoFeasibleSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObjectiveSample {
  double time_s = 0.0;
  double objective = 0.0;
};

enum class Termination { kIterationLimit, kTimeLimit };
std::string_view to_string(Termination t);

struct RunResult {
  Assignment best;
  double best_objective = 0.0;
  double initial_objective = 0.0;
  std::vector<TrajectoryRecord> trajectory;  // record 0 is the start point
  // Best-so-far objective at t = 0, at each improvement, and at termination.
  std::vector<ObjectiveSample> improvements;
  Termination termination = Termination::kIterationLimit;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;
  std::int64_t solver_failures = 0;
  double elapsed_s = 0.0;
};

std::vector<GapSample> gap_series(std::span<const ObjectiveSample> samples,
                                  double reference_objective);

// Repair solver with every variable free. Throws NoFeasibleSolution.
Assignment initial_solution(const Instance& inst, const SolveLimits& limits);

// improved: unchanged. Otherwise max(eta, min(ceil(growth * eta),
// floor(cap_fraction * n))), never above n.
std::size_t update_neighborhood_size(std::size_t eta, bool improved,
                                     double growth, double cap_fraction,
                                     std::size_t n);

double init_tau(const Instance& inst, const Assignment& x0);
double anneal_tau(double tau, double decay);
// 0 until eta reaches floor(cap_fraction * n), sigma_const from then on.
double sigma_value(std::size_t eta, double cap_fraction, std::size_t n,
                   double sigma_const);

// Index into pool.entries(), drawn with probability proportional to
// exp(-obj / (2 tau)). Throws std::invalid_argument on an empty pool or
// tau <= 0.
std::size_t sample_from_pool(const SolutionPool& pool, double tau, Rng& rng);

bool accept(double current_obj, double candidate_obj, double tau,
            AcceptMode mode, Rng& rng);

RunResult run_lns(const Instance& inst, const EngineConfig& cfg,
                  DestroyPolicy& policy, const Assignment& start);
RunResult run_lns(const Instance& inst, const EngineConfig& cfg,
                  DestroyPolicy& policy);

// Incumbent sequence x(0), x(1), ... recorded in a trajectory.
std::vector<Assignment> trajectory_samples(
    std::span<const TrajectoryRecord> trajectory);

}  // namespace spllns
