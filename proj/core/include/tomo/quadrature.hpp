#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tomo/math.hpp"

namespace tomo {

// Reference integrators. Everything here is deterministic and reports an
// error estimate alongside its value.

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
Rule1D gauss_legendre(int n);
/// Gauss-Hermite rule for the weight e^{-x^2} on R.
Rule1D gauss_hermite(int n);
/// `panels` equal sub-intervals of [a, b], each with an `order`-point Gauss-Legendre rule.
Rule1D composite_gauss_legendre(double a, double b, int panels, int order);
/// Composite Gauss-Legendre whose panel edges include every breakpoint in [a, b]
/// and whose panels are no wider than `max_width`.
Rule1D breakpoint_gauss_legendre(double a, double b, std::vector<double> breakpoints,
                                 double max_width, int order);

enum class Rule { Trapezoid, GaussLegendre, GaussHermite };

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  std::size_t dim() const { return lo.size(); }
};

using NdFunction = std::function<cplx(std::span<const double>)>;

struct QuadratureResult {
  cplx value;
  cplx half_resolution;
  double error_estimate = 0.0;
};

/// Tensor-product quadrature with a paired half-resolution value. For the
/// Gauss-Hermite rule `fn` must already contain the weight e^{-|x|^2}; the box
/// is ignored apart from its dimension. Throws ResolutionLimit when the two
/// resolutions differ by more than `tol`.
QuadratureResult integrate_nd(const NdFunction& fn, const Box& domain, Rule rule, int n_points,
                              double tol = 1e300);

struct Extrapolation {
  cplx value;
  double residual = 0.0;
};

/// Polynomial extrapolation in sigma^2 to sigma = 0 (Neville). The residual is
/// the difference between the all-levels and the drop-the-coarsest estimate.
Extrapolation richardson_sigma2(std::span<const double> sigmas, std::span<const cplx> values);

struct OscillatoryResult {
  cplx value;
  double residual = 0.0;
  std::vector<double> levels;
  std::vector<cplx> level_values;
};

/// Integrates fn(x) e^{-sigma^2 |x|^2 / 2} over the box at each damping level
/// (composite Gauss-Legendre, `panels` per dimension) and extrapolates to
/// sigma -> 0. Throws NonConvergent if the residual exceeds `tol`.
OscillatoryResult oscillatory_integrate(const NdFunction& fn, const Box& domain,
                                        std::span<const double> damping_levels, double tol,
                                        int panels = 64, int order = 8);

/// exp(-1/2 x^T A x + b^T x + log_c) with complex symmetric A.
struct GaussianForm {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
  cplx log_c{0.0, 0.0};
};

/// Closed-form value of the integral of a GaussianForm over R^d:
/// (2 pi)^{d/2} det(A)^{-1/2} exp(b^T A^{-1} b / 2 + log_c). The square root is
/// the continuation from Re A > 0 (product of principal eigenvalue roots), so
/// purely oscillatory forms give their Fresnel limit.
cplx gaussian_integral(const GaussianForm& form);

/// Unit-mass Gaussian of width eps used to pair delta-valued kernels. When
/// eps_m > 0 the kernel's first direction (mu1, nu1) is also averaged with a
/// 2-D Gaussian of that width.
struct TestFunction {
  double eps = 0.05;
  double eps_m = 0.0;

  double operator()(double x) const;
  /// int t(X) e^{-i k X} dX
  double spectrum(double k) const { return std::exp(-0.5 * eps * eps * k * k); }
};

TestFunction delta_smear(double eps);

}  // namespace tomo
