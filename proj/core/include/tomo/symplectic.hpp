#pragma once

#include <span>

#include "tomo/phase_space.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// Line integral of f over {mu q + nu p = X} divided by sqrt(mu^2 + nu^2)
/// (the Jacobian of delta(X - mu q - nu p)). Integrates the chord through the
/// grid box with step min(dq, dp)/2, using the exact function when f has one.
/// Throws DegenerateDirection for mu = nu = 0 and TruncatedSupport when f is
/// more than tail_fraction * max|f| where the chord leaves the grid.
cplx radon_forward(const PhaseSpaceFunction& f, const TomographicPoint& x,
                   double tail_fraction = 1e-6);

/// Symplectic tomogram on X x theta with (mu, nu) = (cos theta, sin theta).
Tomogram radon_forward_grid(const PhaseSpaceFunction& f, std::span<const double> x_grid,
                            std::span<const double> theta_grid, double tail_fraction = 1e-6);

/// Filtered back-projection of a symplectic tomogram sampled on X x theta,
/// theta uniformly covering [0, pi). Throws InsufficientAngles (< 8 angles) and
/// AliasedSpectrum (X spacing coarser than the target grid spacing).
PhaseSpaceFunction radon_inverse(const Tomogram& w, const PhaseSpaceGrid& target);

}  // namespace tomo
