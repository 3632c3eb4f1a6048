#pragma once

#include <optional>

#include "tomo/thick.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// A tomographic scheme with its parameters: the window of thick tomography
/// and the inverse constant of the quadratic scheme.
struct SchemeSpec {
  Scheme scheme = Scheme::Symplectic;
  std::optional<WindowFunction> window;
  double c = 1.0 / kPi;

  static SchemeSpec symplectic() { return {}; }
  static SchemeSpec thick(WindowFunction xi) { return {Scheme::Thick, std::move(xi), 1.0 / kPi}; }
  static SchemeSpec quadratic(double c = 1.0 / kPi) { return {Scheme::Quadratic, std::nullopt, c}; }

  const WindowFunction& require_window() const;
};

}  // namespace tomo
