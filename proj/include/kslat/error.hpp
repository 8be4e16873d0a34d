#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kslat {

enum class ErrorKind {
  DimensionMismatch,
  NotSquare,
  NotHermitian,
  NotIdempotent,
  PairwiseProductNonzero,
  SumNotIdentity,
  NotOrthonormal,
  NotComplete,
  EmptyInput,
  ZeroState,
  AmbientDimOne,
  SubsetLimitExceeded,
  SearchCapExceeded,
  InvalidTolerance,
  ParseError,
  ValidationError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::PairwiseProductNonzero: return "PairwiseProductNonzero";
    case ErrorKind::SumNotIdentity: return "SumNotIdentity";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::NotComplete: return "NotComplete";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::AmbientDimOne: return "AmbientDimOne";
    case ErrorKind::SubsetLimitExceeded: return "SubsetLimitExceeded";
    case ErrorKind::SearchCapExceeded: return "SearchCapExceeded";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

/// Single exception type for the library. `kind` identifies the violated
/// condition; `residual` carries the measured quantity when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<double> residual = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), residual_(residual) {}

  /// Re-tags `inner` as `kind`, keeping its message, residual and kind as the cause.
  Error(ErrorKind kind, const std::string& context, const Error& inner)
      : std::runtime_error(std::string(to_string(kind)) + ": " + context + ": " + inner.what()), kind_(kind),
        residual_(inner.residual()), cause_(inner.kind()) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> residual() const noexcept { return residual_; }
  std::optional<ErrorKind> cause() const noexcept { return cause_; }

 private:
  ErrorKind kind_;
  std::optional<double> residual_;
  std::optional<ErrorKind> cause_;
};

}  // namespace kslat
