#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"
#include "crn/statespace.hpp"

namespace crn {

struct OracleOptions {
  /// Direct sparse LU up to this many states, preconditioned BiCGSTAB beyond.
  std::size_t direct_limit = 50000;
  double iterative_tol = 1e-12;
  int max_iterations = 20000;
};

struct OracleSolution {
  std::vector<double> pi;
  /// ||pi Q||_inf.
  double residual = 0.0;
  /// Largest |Q[x][x]|.
  double max_rate = 0.0;
  std::string method;
  int iterations = 0;
};

/// Unique probability vector with pi Q = 0: Q^T pi = 0 with one balance row replaced by
/// sum(pi) = 1. Throws SingularBeyondNullity when Q has more than one closed class (or
/// the factorization is singular).
OracleSolution solve_stationary_oracle(const GeneratorMatrix& q, const OracleOptions& options = {});

/// (1/2) sum |p - q|. Throws SupportMismatch on different lengths.
double total_variation(std::span<const double> p, std::span<const double> q);

/// p scaled to sum to 1.
std::vector<double> renormalized(std::span<const double> p);

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v);

struct StateDiscrepancy {
  State state;
  double formula = 0.0;
  double oracle = 0.0;
  double relative_error = 0.0;
};

struct ResidualOffender {
  State state;
  double residual = 0.0;
  /// residual / (pi(x) sum_k lambda_k(x)).
  double relative = 0.0;
};

struct ComparisonReport {
  double total_variation = 0.0;
  double max_relative_error = 0.0;
  std::vector<StateDiscrepancy> worst;
  double threshold = 0.0;
  /// Lower bound on the class mass inside the window (1 for a finite class, NaN when unknown).
  double window_mass = 1.0;
  /// Certified tail of the class beyond the window (0 finite, NaN unknown).
  double tail_bound = 0.0;
  std::size_t states = 0;
  double max_relative_residual = 0.0;
  std::vector<ResidualOffender> residual_offenders;
  Verdict verdict = Verdict::Pass;
};

/// Compares two distributions listed on the same states (both renormalized first).
/// Pass when TV <= threshold + tail; Fail when it is larger and the tail is known;
/// Inconclusive when it is larger and the tail is unknown.
ComparisonReport compare(std::span<const double> formula, std::span<const double> oracle, const IrreducibleClass& cls,
                         double threshold, double tail_bound = 0.0, std::size_t keep = 10);

struct ReversibilityReport {
  bool reversible = true;
  /// max |pi(x) a(x,y) - pi(y) a(y,x)| / max(pi(x) a(x,y), pi(y) a(y,x)).
  double max_flux_defect = 0.0;
};

/// pi(x) alpha(x,y) = pi(y) alpha(y,x) for all pairs of listed states. Throws NotReversibleNetwork.
ReversibilityReport check_reversibility(std::span<const double> pi, const Network& net, const KineticsSpec& kinetics,
                                        const IrreducibleClass& cls, double rel_tol = 1e-7);

void to_json(nlohmann::json& j, const ComparisonReport& r);

}  // namespace crn
