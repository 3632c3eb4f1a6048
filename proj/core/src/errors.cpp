#include "tomo/errors.hpp"

namespace tomo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidBounds: return "InvalidBounds";
    case ErrorKind::InvalidCount: return "InvalidCount";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::TruncatedSupport: return "TruncatedSupport";
    case ErrorKind::InsufficientAngles: return "InsufficientAngles";
    case ErrorKind::AliasedSpectrum: return "AliasedSpectrum";
    case ErrorKind::SingularWindow: return "SingularWindow";
    case ErrorKind::UnresolvedWindow: return "UnresolvedWindow";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::CalibrationUnstable: return "CalibrationUnstable";
    case ErrorKind::InvalidDim: return "InvalidDim";
    case ErrorKind::LeakageExceeded: return "LeakageExceeded";
    case ErrorKind::IncompatibleLattices: return "IncompatibleLattices";
    case ErrorKind::ResolutionLimit: return "ResolutionLimit";
    case ErrorKind::UnsmearedKernel: return "UnsmearedKernel";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace tomo
