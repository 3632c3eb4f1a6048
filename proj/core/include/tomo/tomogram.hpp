#pragma once

#include <string_view>
#include <vector>

#include "tomo/math.hpp"

namespace tomo {

enum class Scheme { Symplectic, Thick, Quadratic };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

/// A point x = (X, mu, nu) of the tomographic manifold.
struct TomographicPoint {
  double X = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

/// Sampled tomographic symbol. Structured lattices are stored with X varying
/// fastest: symplectic/thick as theta-major (index = t * nX + x), quadratic as
/// (mu, nu)-major (index = (i_mu * n_nu + i_nu) * nX + x).
struct Tomogram {
  Scheme scheme = Scheme::Symplectic;
  std::vector<TomographicPoint> points;
  std::vector<cplx> values;

  std::vector<double> x_axis;
  std::vector<double> theta_axis;
  std::vector<double> mu_axis;
  std::vector<double> nu_axis;

  bool has_theta_lattice() const {
    return !theta_axis.empty() && values.size() == x_axis.size() * theta_axis.size();
  }
  bool has_center_lattice() const {
    return !mu_axis.empty() && !nu_axis.empty() &&
           values.size() == x_axis.size() * mu_axis.size() * nu_axis.size();
  }

  cplx at_theta(std::size_t t, std::size_t x) const { return values[t * x_axis.size() + x]; }
  cplx at_center(std::size_t i_mu, std::size_t i_nu, std::size_t x) const {
    return values[(i_mu * nu_axis.size() + i_nu) * x_axis.size() + x];
  }

  /// Throws BadInput when points/values/lattice sizes disagree.
  void validate() const;
};

/// Trapezoid integral over X of every fixed-direction slice of a theta lattice.
std::vector<cplx> slice_integrals(const Tomogram& w);

/// int W dX for every centre of a quadratic lattice (mu-major); midpoint rule
/// when the X axis starts at half a step, trapezoid otherwise.
std::vector<cplx> center_integrals(const Tomogram& w);

/// Uniform axis helper: n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);
/// n angles k * pi / n, k = 0..n-1, covering [0, pi).
std::vector<double> half_circle_angles(int n);

}  // namespace tomo
