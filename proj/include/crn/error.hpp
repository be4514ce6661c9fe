#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crn {

enum class ErrorCode {
  // network model
  DuplicateSpeciesName,
  SelfLoopReaction,
  EmptyNetwork,
  DuplicateReaction,
  InvalidComplex,
  CoefficientOverflow,
  // parser
  SyntaxError,
  UnknownSpecies,
  MissingRateConstant,
  NonPositiveRate,
  // structure
  InternalRankInconsistency,
  // kinetics
  InvalidSpec,
  // equilibrium
  NonPositiveC,
  NotStronglyConnected,
  NotWeaklyReversible,
  NotComplexBalanced,
  SolverDiverged,
  NotReversibleNetwork,
  // state space
  NotFinite,
  // stationary
  NotSummable,
  // simulation
  Explosion,
  BurnInTooLong,
  // oracle / comparison
  SupportMismatch,
  SingularBeyondNullity,
  // io
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Source position of a parse error, 1-based.
struct SourcePosition {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, SourcePosition pos);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourcePosition>& position() const noexcept { return pos_; }
  /// The message without the code and position prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::optional<SourcePosition> pos_;
  std::string message_;
};

}  // namespace crn
