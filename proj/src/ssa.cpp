#include "crn/ssa.hpp"

#include <cmath>
#include <exception>
#include <ostream>
#include <random>
#include <thread>

#include "crn/error.hpp"

namespace crn {

namespace {

// Uniform double in [0, 1) from the top 53 bits; std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Reactions whose intensity may change when reaction k fires.
std::vector<std::vector<std::size_t>> dependency_graph(const Network& net, const KineticsSpec& kinetics) {
  const std::size_t r = net.num_reactions();
  std::vector<std::vector<std::size_t>> deps(r);
  if (kinetics.family() == KineticsFamily::RatioForm) {
    // theta(x) / theta(x - nu) may depend on every coordinate.
    for (auto& d : deps) {
      for (std::size_t j = 0; j < r; ++j) d.push_back(j);
    }
    return deps;
  }
  for (std::size_t k = 0; k < r; ++k) {
    const auto& v = net.reaction_vector(k);
    for (std::size_t j = 0; j < r; ++j) {
      const auto& src = net.source(j).coeffs;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0 && src[i] != 0) {
          deps[k].push_back(j);
          break;
        }
      }
    }
  }
  return deps;
}

// Runs the direct method and reports each holding interval to `visit(state, t_begin, t_end)`
// and each jump to `jump(t, reaction, new_state)`.
template <class Visit, class Jump>
std::uint64_t run(const Network& net, const KineticsSpec& kinetics, const State& x0, double t_final,
                  std::uint64_t seed, std::uint64_t max_jumps, bool& absorbed, State& final_state, Visit&& visit,
                  Jump&& jump) {
  if (!(t_final > 0.0)) throw Error(ErrorCode::InvalidSpec, "final time must be positive");
  if (x0.size() != net.num_species()) throw Error(ErrorCode::InvalidSpec, "x0 has the wrong length");
  for (Count v : x0) {
    if (v < 0) throw Error(ErrorCode::InvalidSpec, "x0 must be nonnegative");
  }
  kinetics.validate(net);
  const auto deps = dependency_graph(net, kinetics);
  const std::size_t r = net.num_reactions();
  std::mt19937_64 rng(seed);
  State x = x0;
  std::vector<double> a(r);
  for (std::size_t k = 0; k < r; ++k) a[k] = intensity(kinetics, net, k, x);
  double t = 0.0;
  std::uint64_t jumps = 0;
  absorbed = false;
  for (;;) {
    double total = 0.0;
    for (double v : a) total += v;
    if (!(total > 0.0)) {
      absorbed = true;
      visit(x, t, t_final);
      break;
    }
    if (!std::isfinite(total)) throw Error(ErrorCode::Explosion, "total intensity is not finite");
    const double dt = -std::log1p(-uniform01(rng)) / total;
    if (t + dt >= t_final) {
      visit(x, t, t_final);
      break;
    }
    visit(x, t, t + dt);
    t += dt;
    const double target = uniform01(rng) * total;
    std::size_t k = 0;
    double acc = a[0];
    while (acc <= target && k + 1 < r) acc += a[++k];
    // Rounding can leave the target just above the running sum; never pick a silent reaction.
    while (a[k] <= 0.0 && k > 0) --k;
    if (++jumps > max_jumps) {
      throw Error(ErrorCode::Explosion,
                  "jump limit " + std::to_string(max_jumps) + " exceeded at t = " + std::to_string(t) +
                      " (jump count " + std::to_string(jumps) + ")");
    }
    const auto& v = net.reaction_vector(k);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += v[i];
    for (std::size_t j : deps[k]) a[j] = intensity(kinetics, net, j, x);
    jump(t, k, x);
  }
  final_state = x;
  return jumps;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t replica) {
  return splitmix64(base_seed + (replica + 1) * 0x9E3779B97F4A7C15ULL);
}

Trajectory simulate(const Network& net, const KineticsSpec& kinetics, const State& x0, double t_final,
                    std::uint64_t seed, const SimulationOptions& options) {
  Trajectory traj;
  traj.seed = seed;
  traj.t_final = t_final;
  if (options.record) {
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    traj.reactions.push_back(-1);
  }
  traj.jumps = run(
      net, kinetics, x0, t_final, seed, options.max_jumps, traj.absorbed, traj.final_state,
      [](const State&, double, double) {},
      [&](double t, std::size_t k, const State& x) {
        if (!options.record) return;
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.reactions.push_back(static_cast<std::int64_t>(k));
      });
  return traj;
}

double EmpiricalDistribution::probability(const State& x) const {
  auto it = weights.find(x);
  return it == weights.end() ? 0.0 : it->second;
}

std::vector<double> EmpiricalDistribution::means(std::size_t m) const {
  std::vector<double> out(m, 0.0);
  for (const auto& [x, w] : weights) {
    for (std::size_t i = 0; i < m; ++i) out[i] += w * static_cast<double>(x[i]);
  }
  return out;
}

EmpiricalDistribution occupation_measure(const Trajectory& traj, double burn_in) {
  if (!(burn_in < traj.t_final) || burn_in < 0.0) {
    throw Error(ErrorCode::BurnInTooLong, "burn-in must lie in [0, t_final)");
  }
  if (traj.states.empty()) throw Error(ErrorCode::InvalidSpec, "trajectory was simulated without recording");
  EmpiricalDistribution emp;
  emp.burn_in = burn_in;
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const double begin = std::max(traj.times[j], burn_in);
    const double end = j + 1 < traj.times.size() ? traj.times[j + 1] : traj.t_final;
    if (end > begin) emp.weights[traj.states[j]] += end - begin;
  }
  const double span = traj.t_final - burn_in;
  for (auto& [x, w] : emp.weights) w /= span;
  return emp;
}

EmpiricalDistribution occupation_measure(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                         double t_final, double burn_in, std::uint64_t seed,
                                         std::uint64_t max_jumps) {
  if (!(burn_in < t_final) || burn_in < 0.0) {
    throw Error(ErrorCode::BurnInTooLong, "burn-in must lie in [0, t_final)");
  }
  EmpiricalDistribution emp;
  emp.burn_in = burn_in;
  // Accumulate per state in a hash map, then move into the ordered map.
  StateIndex slot;
  std::vector<double> time;
  bool absorbed = false;
  State last;
  run(
      net, kinetics, x0, t_final, seed, max_jumps, absorbed, last,
      [&](const State& x, double t0, double t1) {
        const double begin = std::max(t0, burn_in);
        if (t1 <= begin) return;
        auto [it, inserted] = slot.emplace(x, time.size());
        if (inserted) time.push_back(0.0);
        time[it->second] += t1 - begin;
      },
      [](double, std::size_t, const State&) {});
  const double span = t_final - burn_in;
  for (const auto& [x, i] : slot) emp.weights[x] = time[i] / span;
  return emp;
}

std::vector<State> ensemble_endpoints(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                      double t_final, std::size_t n, std::uint64_t base_seed, std::size_t threads,
                                      std::uint64_t max_jumps) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "ensemble needs at least one replica");
  kinetics.validate(net);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::vector<State> ends(n);
  std::vector<std::exception_ptr> errors(n);
  SimulationOptions opts;
  opts.record = false;
  opts.max_jumps = max_jumps;
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        ends[i] = simulate(net, kinetics, x0, t_final, replica_seed(base_seed, i), opts).final_state;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w * n / threads, (w + 1) * n / threads);
    for (auto& t : pool) t.join();
  }
  std::size_t failed = 0;
  std::exception_ptr first;
  for (auto& e : errors) {
    if (e) {
      ++failed;
      if (!first) first = e;
    }
  }
  if (first) {
    try {
      std::rethrow_exception(first);
    } catch (const Error& err) {
      throw Error(err.code(), std::to_string(failed) + " of " + std::to_string(n) +
                                  " replicas failed; first failure: " + err.what());
    }
  }
  return ends;
}

EmpiricalDistribution ensemble(const Network& net, const KineticsSpec& kinetics, const State& x0, double t_final,
                               std::size_t n, std::uint64_t base_seed, std::size_t threads, std::uint64_t max_jumps) {
  const auto ends = ensemble_endpoints(net, kinetics, x0, t_final, n, base_seed, threads, max_jumps);
  EmpiricalDistribution emp;
  emp.weighting = Weighting::EndpointEnsemble;
  emp.replicas = n;
  const double w = 1.0 / static_cast<double>(n);
  for (const auto& x : ends) emp.weights[x] += w;
  return emp;
}

std::vector<double> on_support(const EmpiricalDistribution& emp, const IrreducibleClass& cls) {
  std::vector<double> p(cls.size(), 0.0);
  for (const auto& [x, w] : emp.weights) {
    const std::size_t a = cls.index_of(x);
    if (a == cls.size()) throw Error(ErrorCode::SupportMismatch, "empirical mass outside the class");
    p[a] = w;
  }
  return p;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Network& net) {
  out << 't';
  for (const auto& s : net.species()) out << ',' << s.name;
  out << ",reaction\n";
  out.precision(17);
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    out << traj.times[j];
    for (Count v : traj.states[j]) out << ',' << v;
    out << ',' << traj.reactions[j] << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const EmpiricalDistribution& emp, const Network& net) {
  for (const auto& s : net.species()) out << s.name << ',';
  out << "weight\n";
  out.precision(17);
  for (const auto& [x, w] : emp.weights) {
    for (Count v : x) out << v << ',';
    out << w << '\n';
  }
}

}  // namespace crn
