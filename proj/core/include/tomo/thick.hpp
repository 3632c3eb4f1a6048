#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tomo/phase_space.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

enum class WindowKind { Rectangular, Gaussian, Custom };

/// Nonnegative detector window Xi(Y). Gaussian windows have unit mass and
/// standard deviation sigma; custom windows are piecewise linear through their
/// samples and vanish outside them.
class WindowFunction {
 public:
  static WindowFunction rectangular(double delta);
  static WindowFunction gaussian(double sigma);
  static WindowFunction custom(std::vector<double> y, std::vector<double> xi);

  WindowKind kind() const { return kind_; }
  double delta() const { return delta_; }
  double sigma() const { return sigma_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& y_samples() const { return y_; }
  const std::vector<double>& xi_samples() const { return xi_; }

  double operator()(double y) const;
  /// int Xi(z) e^{i k z} dz
  cplx fourier(double k) const;
  /// Interval outside which Xi is zero (Gaussians: +-9 sigma).
  std::pair<double, double> support() const;
  /// Points where Xi or its derivative jumps.
  std::vector<double> breakpoints() const;
  /// Length over which Xi changes appreciably.
  double scale() const;

  /// N_Xi = 1 / fourier(1). Throws SingularWindow when |fourier(1)| < 1e-12.
  cplx normalization() const;

  /// The same window multiplied by `factor` > 0.
  WindowFunction scaled(double factor) const;

 private:
  WindowFunction() = default;
  void cache();

  WindowKind kind_ = WindowKind::Rectangular;
  double delta_ = 0.0;
  double sigma_ = 0.0;
  double amplitude_ = 1.0;
  std::vector<double> y_;
  std::vector<double> xi_;
  cplx fourier_one_{0.0, 0.0};
};

cplx window_normalization(const WindowFunction& xi);

/// int f(q, p) Xi(X - mu q - nu p) dq dp, as the window average of the ideal
/// tomogram: int Xi(Y) radon_forward(f, (X - Y, mu, nu)) dY.
cplx thick_forward(const PhaseSpaceFunction& f, const WindowFunction& xi,
                   const TomographicPoint& x);

/// Thick tomogram on X x theta with (mu, nu) = (cos theta, sin theta).
Tomogram thick_forward_grid(const PhaseSpaceFunction& f, const WindowFunction& xi,
                            std::span<const double> x_grid, std::span<const double> theta_grid);

/// Convolves every fixed-direction slice of an ideal tomogram (uniform in X)
/// with Xi. The slice is interpolated by local degree-5 polynomials and set to
/// zero outside its X range. Throws UnresolvedWindow when a custom window
/// cannot be represented on the slice's X lattice.
Tomogram thick_from_ideal(const Tomogram& ideal, const WindowFunction& xi);

}  // namespace tomo
