#include "crn/error.hpp"

namespace crn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateSpeciesName: return "DuplicateSpeciesName";
    case ErrorCode::SelfLoopReaction: return "SelfLoopReaction";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::DuplicateReaction: return "DuplicateReaction";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::CoefficientOverflow: return "CoefficientOverflow";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSpecies: return "UnknownSpecies";
    case ErrorCode::MissingRateConstant: return "MissingRateConstant";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::InternalRankInconsistency: return "InternalRankInconsistency";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonPositiveC: return "NonPositiveC";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::NotWeaklyReversible: return "NotWeaklyReversible";
    case ErrorCode::NotComplexBalanced: return "NotComplexBalanced";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::NotReversibleNetwork: return "NotReversibleNetwork";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::NotSummable: return "NotSummable";
    case ErrorCode::Explosion: return "Explosion";
    case ErrorCode::BurnInTooLong: return "BurnInTooLong";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::SingularBeyondNullity: return "SingularBeyondNullity";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           const std::optional<SourcePosition>& pos) {
  std::string out(to_string(code));
  if (pos) {
    out += " at " + std::to_string(pos->line) + ":" + std::to_string(pos->column);
  }
  if (!message.empty()) {
    out += ": " + message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(format_message(code, message, std::nullopt)), code_(code), message_(message) {}

Error::Error(ErrorCode code, const std::string& message, SourcePosition pos)
    : std::runtime_error(format_message(code, message, pos)), code_(code), pos_(pos), message_(message) {}

}  // namespace crn
