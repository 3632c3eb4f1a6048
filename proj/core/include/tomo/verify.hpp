#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tomo {

/// Invariant suites run by `tomo verify`: classical transforms, quantum
/// operator algebra at a given truncation, and star-product kernels.
struct VerifyOptions {
  std::string suite = "all";  // classical | quantum | kernels | all
  int dim = 16;
  std::uint64_t seed = 1;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::string to_json() const;
};

/// Throws BadInput for an unknown suite name and InvalidDim for dim < 2.
VerifyReport run_verify(const VerifyOptions& options);

}  // namespace tomo
