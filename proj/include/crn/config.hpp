#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace crn {

// Numeric defaults for every tool. Each can be overridden by a command-line flag;
// CRN_SEED and CRN_TOL override the seed and solver tolerance from the
// environment, and flags win over the environment.
namespace defaults {
inline constexpr double kSolverTol = 1e-9;
inline constexpr double kVerifyTv = 1e-10;
inline constexpr std::size_t kStateCap = 250000;
inline constexpr double kTailTarget = 1e-10;
inline constexpr std::uint64_t kMaxJumps = 1000000000;
inline constexpr std::uint64_t kSeed = 20100101;
inline constexpr double kFinalTime = 1e4;
inline constexpr double kBurnIn = 1e2;
/// Relative tolerance of the stationary-equation residual check.
inline constexpr double kResidualTol = 1e-10;
}  // namespace defaults

struct RunConfig {
  double tol = defaults::kSolverTol;
  double tv_threshold = defaults::kVerifyTv;
  std::size_t cap = defaults::kStateCap;
  double tail_target = defaults::kTailTarget;
  std::uint64_t max_jumps = defaults::kMaxJumps;
  std::uint64_t seed = defaults::kSeed;
  double t_final = defaults::kFinalTime;
  double burn_in = defaults::kBurnIn;
  double residual_tol = defaults::kResidualTol;
};

/// Defaults with CRN_SEED / CRN_TOL applied. Throws InvalidSpec on malformed values.
RunConfig config_from_environment();

}  // namespace crn
