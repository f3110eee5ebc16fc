#pragma once

#include <stdexcept>
#include <string>

namespace fplab {

enum class ErrorKind {
  InvalidArgument,
  GridMismatch,
  NonFinite,
  Precondition,
  Convergence,
  Hypothesis,
  Schema,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `kind` is stable and is what the CLI
/// writes into its machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fplab
