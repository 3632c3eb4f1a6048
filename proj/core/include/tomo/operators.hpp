#pragma once

#include <utility>

#include <Eigen/Dense>

#include "tomo/phase_space.hpp"
#include "tomo/scheme.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

inline constexpr int kDefaultDim = 16;

/// Operator on the span of |0>, ..., |dim-1>.
struct Operator {
  int dim = 0;
  Eigen::MatrixXcd matrix;

  static Operator zero(int dim);
  static Operator identity(int dim);

  cplx trace() const { return matrix.trace(); }
  /// ||A - A^dagger||_F
  double hermitian_defect() const { return (matrix - matrix.adjoint()).norm(); }
  double frobenius_distance(const Operator& other) const { return (matrix - other.matrix).norm(); }
};

/// Throws InvalidDim for dim < 2.
std::pair<Operator, Operator> ladder_ops(int dim);
Operator position_op(int dim);
Operator momentum_op(int dim);
Operator number_op(int dim);
Operator parity(int dim);

/// Truncated matrix of exp(beta a^dagger - conj(beta) a), from the exact
/// infinite-dimensional matrix elements (Laguerre closed form).
Eigen::MatrixXcd displacement(cplx beta, int dim);

/// D_hat(q, p) = (1/pi) D(2 alpha) I with alpha = (q + i p)/sqrt(2).
Operator weyl_D(double q, double p, int dim);
/// As weyl_D, but throws LeakageExceeded when the displacement moves more
/// than 1e-6 of the vacuum's weight onto the top retained level or beyond.
Operator weyl_D_checked(double q, double p, int dim);
double displacement_leakage(double q, double p, int dim);

/// f_A(q, p) = Tr(A U(q, p)) with U = 2 pi D_hat.
cplx weyl_symbol(const Operator& a, double q, double p);
/// Samples of the Weyl symbol, backed by the exact symbol.
PhaseSpaceFunction weyl_symbol_grid(const Operator& a, const PhaseSpaceGrid& grid);

/// A = int f(q, p) D_hat(q, p) dq dp (trapezoid on the grid of f). Throws
/// TruncatedSupport when |f| on the grid boundary exceeds tail_tol * max|f|.
Operator weyl_reconstruct(const PhaseSpaceFunction& f, int dim, double tail_tol = 1e-6);

/// Density matrix of a state in the number basis. Throws LeakageExceeded when
/// more than 1e-6 of the state's weight lies beyond the truncation.
Operator density_matrix(const StateSpec& spec, int dim);

/// Dequantizer phi_hat(x) = int phi(q, p, x) D_hat(q, p) dq dp.
Operator scheme_dequantizer(const SchemeSpec& scheme, const TomographicPoint& x, int dim);
/// Quantizer chi_hat(x) = int chi(q, p, x) U(q, p) dq dp, so that
/// A = int Tr(A phi_hat(x)) chi_hat(x) dx.
Operator scheme_quantizer(const SchemeSpec& scheme, const TomographicPoint& x, int dim);

/// Tr(A phi_hat(x)).
cplx tomographic_symbol(const Operator& a, const SchemeSpec& scheme, const TomographicPoint& x);

/// Reconstruction A = int W(x) chi_hat(x) dx from a sampled tomogram.
/// Symplectic/thick: X x theta lattice, using the Fourier slice form
/// A = (1/2pi) int_0^pi dtheta int |k| dk W_theta(k) D(k u_theta).
/// Quadratic: through the phase-space inverse and weyl_reconstruct.
Operator operator_from_tomogram(const Tomogram& w, const SchemeSpec& scheme, int dim);

}  // namespace tomo
