#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tvsync {

enum class ErrorKind {
  ZeroRow,
  NegativeEntry,
  NotSquare,
  NonFinite,
  DimensionTooSmall,
  DimensionMismatch,
  NotRowSumConstant,
  NotStochastic,
  EmptyList,
  PreconditionViolated,
  ProcessExhausted,
  AllVectorsCollapsed,
  SingularMatrix,
  OrbitDiverged,
  StateDiverged,
  DegenerateDimension,
  InvalidParams,
  EmptySet,
  BudgetExceeded,
  UnknownParameter,
  InvalidConfig,
  NegInfArithmetic,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind is stable and tested; the
/// message carries the indices or values that triggered it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Config and validation problems map to CLI exit code 2, the rest to 3.
  bool is_config_error() const noexcept {
    return kind_ == ErrorKind::InvalidConfig || kind_ == ErrorKind::UnknownParameter ||
           kind_ == ErrorKind::InvalidParams || kind_ == ErrorKind::EmptyList ||
           kind_ == ErrorKind::EmptySet || kind_ == ErrorKind::NotStochastic ||
           kind_ == ErrorKind::NotSquare || kind_ == ErrorKind::NegativeEntry ||
           kind_ == ErrorKind::ZeroRow || kind_ == ErrorKind::DimensionMismatch ||
           kind_ == ErrorKind::NotRowSumConstant || kind_ == ErrorKind::NonFinite ||
           kind_ == ErrorKind::DimensionTooSmall;
  }

 private:
  ErrorKind kind_;
};

}  // namespace tvsync
