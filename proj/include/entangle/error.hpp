#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entangle {

enum class ErrorKind {
  InvalidArgument,
  GridTooCoarse,
  GridTooLarge,
  GridMismatch,
  NormUnderflow,
  AnnihilatedState,
  WrongBasis,
  UnsupportedOrder,
  BoundaryLeak,
  NegativeVarianceFactor,
  OracleDisagreement,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this type; `kind()` lets the CLI
/// map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace entangle
