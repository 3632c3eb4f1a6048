#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tomo {

enum class ErrorKind {
  InvalidBounds,
  InvalidCount,
  InvalidState,
  DegenerateDirection,
  TruncatedSupport,
  InsufficientAngles,
  AliasedSpectrum,
  SingularWindow,
  UnresolvedWindow,
  NonConvergent,
  CalibrationUnstable,
  InvalidDim,
  LeakageExceeded,
  IncompatibleLattices,
  ResolutionLimit,
  UnsmearedKernel,
  BadInput,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is a tomo::Error carrying its kind; the CLI maps
// kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tomo
