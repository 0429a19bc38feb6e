#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toric {

/// Failure categories raised by the toolkit. The CLI maps these to exit codes.
enum class ErrorCode {
  DimensionMismatch,
  ZeroVector,
  NotPrimitive,
  NotUnimodular,
  DuplicateNormal,
  PointNotInCone,
  InvalidIndex,
  EmptyCone,
  OffsetMismatch,
  NotUnimodularAtFace,
  EmptyOrLowerDim,
  IncompatibleGluing,
  InconsistentFaceBasis,
  IncompatibleCharts,
  InconsistentIncidence,
  NotACocycle,
  BaseMismatch,
  InvalidFace,
  InvalidArgument,
  ClassificationMismatch,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::DuplicateNormal: return "DuplicateNormal";
    case ErrorCode::PointNotInCone: return "PointNotInCone";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::EmptyCone: return "EmptyCone";
    case ErrorCode::OffsetMismatch: return "OffsetMismatch";
    case ErrorCode::NotUnimodularAtFace: return "NotUnimodularAtFace";
    case ErrorCode::EmptyOrLowerDim: return "EmptyOrLowerDim";
    case ErrorCode::IncompatibleGluing: return "IncompatibleGluing";
    case ErrorCode::InconsistentFaceBasis: return "InconsistentFaceBasis";
    case ErrorCode::IncompatibleCharts: return "IncompatibleCharts";
    case ErrorCode::InconsistentIncidence: return "InconsistentIncidence";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::InvalidFace: return "InvalidFace";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ClassificationMismatch: return "ClassificationMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace toric
