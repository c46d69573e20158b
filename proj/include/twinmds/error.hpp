// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_ERROR_HPP
#define TWINMDS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinmds {

enum class ErrorCode {
  NotPrime,
  ZeroInverse,
  DimensionMismatch,
  FieldMismatch,
  SingularMatrix,
  TooFewPoints,
  DuplicatePoints,
  NotMds,
  InstanceTooLarge,
  SingularSubmatrix,
  InvalidIndex,
  PayloadTooLarge,
  NotEnoughLiveNodes,
  MixedTypes,
  DeadNode,
  SameTypeHelper,
  EmptyHelper,
  NotEnoughHelpers,
  WrongHelperType,
  InsufficientSeeds,
  BadPayloadLength,
  BudgetExceeded,
  MissingRepairPlan,
  BadRange,
  RepairStarvation,
  MalformedScenario,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::NotMds: return "NotMds";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::SingularSubmatrix: return "SingularSubmatrix";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::NotEnoughLiveNodes: return "NotEnoughLiveNodes";
    case ErrorCode::MixedTypes: return "MixedTypes";
    case ErrorCode::DeadNode: return "DeadNode";
    case ErrorCode::SameTypeHelper: return "SameTypeHelper";
    case ErrorCode::EmptyHelper: return "EmptyHelper";
    case ErrorCode::NotEnoughHelpers: return "NotEnoughHelpers";
    case ErrorCode::WrongHelperType: return "WrongHelperType";
    case ErrorCode::InsufficientSeeds: return "InsufficientSeeds";
    case ErrorCode::BadPayloadLength: return "BadPayloadLength";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MissingRepairPlan: return "MissingRepairPlan";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::RepairStarvation: return "RepairStarvation";
    case ErrorCode::MalformedScenario: return "MalformedScenario";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace twinmds

#endif  // TWINMDS_ERROR_HPP
