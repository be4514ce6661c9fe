#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"
#include "crn/statespace.hpp"

namespace crn {

/// SplitMix64 output for state `x` (one step: add the golden gamma, then mix).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replica i: splitmix64(base_seed + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t replica);

struct SimulationOptions {
  std::uint64_t max_jumps = 1000000000;
  /// Keep every jump (times, states, reactions); otherwise only the endpoint.
  bool record = true;
};

struct Trajectory {
  /// times[0] = 0 and states[0] = x0; entry j > 0 is the j-th jump.
  std::vector<double> times;
  std::vector<State> states;
  /// Reaction fired at each jump; -1 for the initial entry.
  std::vector<std::int64_t> reactions;
  std::uint64_t seed = 0;
  double t_final = 0.0;
  std::uint64_t jumps = 0;
  /// Total intensity hit zero; the path is held constant up to t_final.
  bool absorbed = false;
  State final_state;
};

/// Gillespie direct method up to time t_final. Deterministic given the seed. Throws
/// Explosion (with the jump count) when max_jumps is exceeded before t_final.
Trajectory simulate(const Network& net, const KineticsSpec& kinetics, const State& x0, double t_final,
                    std::uint64_t seed, const SimulationOptions& options = {});

enum class Weighting { TimeAveraged, EndpointEnsemble };

struct EmpiricalDistribution {
  std::map<State, double> weights;
  Weighting weighting = Weighting::TimeAveraged;
  double burn_in = 0.0;
  std::size_t replicas = 0;

  double probability(const State& x) const;
  std::vector<double> means(std::size_t m) const;
};

/// Time-weighted state frequencies over (burn_in, t_final]. Throws BurnInTooLong.
EmpiricalDistribution occupation_measure(const Trajectory& traj, double burn_in);

/// Same estimator computed while simulating, without storing the path.
EmpiricalDistribution occupation_measure(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                         double t_final, double burn_in, std::uint64_t seed,
                                         std::uint64_t max_jumps = 1000000000);

/// Endpoint histogram of n replicas with seeds replica_seed(base_seed, i). Replicas are split
/// across `threads` workers; the reduction runs in replica order so the result does not
/// depend on the thread count.
EmpiricalDistribution ensemble(const Network& net, const KineticsSpec& kinetics, const State& x0, double t_final,
                               std::size_t n, std::uint64_t base_seed, std::size_t threads = 0,
                               std::uint64_t max_jumps = 1000000000);

/// Endpoints of n replicas in replica order (what `ensemble` histograms).
std::vector<State> ensemble_endpoints(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                      double t_final, std::size_t n, std::uint64_t base_seed,
                                      std::size_t threads = 0, std::uint64_t max_jumps = 1000000000);

/// Probabilities of the empirical measure in the class's state order. Throws SupportMismatch
/// when the empirical measure puts mass outside the class.
std::vector<double> on_support(const EmpiricalDistribution& emp, const IrreducibleClass& cls);

/// CSV "t,<species...>,reaction".
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Network& net);
/// CSV "<species...>,weight".
void write_histogram_csv(std::ostream& out, const EmpiricalDistribution& emp, const Network& net);

}  // namespace crn
