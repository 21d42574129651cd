#pragma once

#include <stdexcept>
#include <string>

namespace cpbures {

/// Every failure raised by the library carries one of these kinds so the CLI
/// can map it onto an exit code.
enum class ErrorKind {
  NonSquare,
  NonHermitian,
  NotPsd,
  DimensionMismatch,
  ZeroMap,
  NotContraction,
  NotUnitary,
  NotProbability,
  CenterNotScalarGram,
  ResidualNotCP,
  SolverFailure,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace cpbures
