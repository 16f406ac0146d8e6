#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruelle {

enum class ErrorCode {
  InvalidArgument,
  InvalidDomain,
  DegenerateMap,
  InadmissibleDomain,
  EmptyAlphabet,
  BadIndex,
  NoConvergence,
  EscapedDomain,
  BudgetExceeded,
  NotContracting,
  NotEnclosed,
  DimensionUnsupported,
  SolverFailure,
  RootFindingFailure,
  WrongDimension,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::InadmissibleDomain: return "InadmissibleDomain";
    case ErrorCode::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EscapedDomain: return "EscapedDomain";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::NotEnclosed: return "NotEnclosed";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::RootFindingFailure: return "RootFindingFailure";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace ruelle
