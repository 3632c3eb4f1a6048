#pragma once

#include <span>
#include <vector>

#include "tomo/phase_space.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// Half the circle average of f over the circle of squared radius X centred at
/// (mu, nu); zero for X <= 0. Throws TruncatedSupport when f is not negligible
/// where the circle leaves the grid.
cplx circle_forward(const PhaseSpaceFunction& f, const TomographicPoint& x);

/// Quadratic tomogram on X x mu x nu (X fastest).
Tomogram circle_forward_grid(const PhaseSpaceFunction& f, std::span<const double> x_grid,
                             std::span<const double> mu_grid, std::span<const double> nu_grid,
                             double tail_fraction = 1e-6);

/// Sampling of the quadratic manifold used for round trips and calibration.
struct QuadraticLattice {
  double center_extent = 5.0;  // mu, nu in [-extent, extent]
  double center_step = 0.2;
  double x_step = 0.2;         // X sampled at midpoints (k + 1/2) x_step
  double x_max = 121.0;

  std::vector<double> x_axis() const;
  std::vector<double> center_axis() const;
};

Tomogram quadratic_tomogram(const PhaseSpaceFunction& f, const QuadraticLattice& lattice = {});

struct QuadraticInverseOptions {
  std::vector<double> damping{0.4, 0.2, 0.1};
  double c = 1.0 / kPi;  // multiplies the 1/pi prefactor of the inverse kernel
  double tol = 1e-2;
};

/// f(q, p) = (c / pi) int w(X, mu, nu) exp(i (X - (q - mu)^2 - (p - nu)^2)) dX dmu dnu
/// with Gaussian damping exp(-s^2 (mu^2 + nu^2) / 2) extrapolated to s -> 0.
/// Throws NonConvergent when int w e^{iX} dX on the edge of the (mu, nu)
/// lattice exceeds tol times its peak (the lattice does not cover the
/// integrand) or when the damping extrapolation residual exceeds tol
/// (relative L2).
PhaseSpaceFunction quadratic_inverse(const Tomogram& w, const PhaseSpaceGrid& target,
                                     const QuadraticInverseOptions& options = {});

struct Calibration {
  double c = 0.0;
  std::vector<double> per_reference;
};

/// Least-squares scale c such that quadratic_inverse(circle_forward(rho)) at
/// that c best matches rho, for each reference; returns the mean. Throws
/// CalibrationUnstable when the references disagree by more than 5%.
Calibration calibrate_inverse_constant(std::span<const StateSpec> references,
                                       const QuadraticLattice& lattice = {},
                                       const PhaseSpaceGrid& target = make_grid(-4, 4, -4, 4, 41,
                                                                                41));

/// Default references: the vacuum and the coherent state alpha = 1.
Calibration calibrate_inverse_constant();

}  // namespace tomo
