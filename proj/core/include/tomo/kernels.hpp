#pragma once

#include <functional>
#include <vector>

#include "tomo/quadrature.hpp"
#include "tomo/scheme.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// (1/pi^2) exp(2i[(q1 p2 - q2 p1) + (q2 p3 - q3 p2) + (q3 p1 - q1 p3)]).
cplx groenewald(double q1, double p1, double q2, double p2, double q3, double p3);

/// Classical quantizer or dequantizer of a scheme, scaled by `amplitude`:
/// symplectic chi = e^{i(X - mu q - nu p)} / 4pi^2, phi = delta(X - mu q - nu p);
/// thick chi = N_Xi * symplectic chi, phi = Xi(X - mu q - nu p);
/// quadratic chi = (c/pi) e^{i(X - (q-mu)^2 - (p-nu)^2)}, phi = delta(X - (q-mu)^2 - (p-nu)^2).
struct SchemeKernel {
  SchemeSpec scheme;
  cplx amplitude{1.0, 0.0};
};

struct KernelValue {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
};

struct OracleOptions {
  std::vector<double> damping{4e-3, 2e-3, 1e-3};
  double tol = 1e-2;       // relative Richardson residual allowed
  double reach = 9.0;      // Fourier range of the test function, in units of 1/eps
  double panel = 0.5;      // widest k panel
  int order = 10;          // Gauss-Legendre nodes per panel
};

/// Smeared value of int chi1 chi2 phi3 G over R^6, i.e.
/// int K(x1, x2, (X, mu3, nu3)) t(X - X3) dX, with the X integral done in
/// Fourier space and each Fourier mode a closed-form complex Gaussian
/// integral at several damping levels (extrapolated to zero damping).
/// Symplectic and thick chi1 need test.eps_m > 0 (UnsmearedKernel otherwise):
/// chi1 is then averaged over (mu1, nu1) with a Gaussian of that width.
/// Throws NonConvergent when the damping extrapolation does not settle.
KernelValue kernel_compose(const SchemeKernel& chi1, const SchemeKernel& chi2,
                           const SchemeKernel& phi3, const TomographicPoint& x1,
                           const TomographicPoint& x2, const TomographicPoint& x3,
                           const TestFunction& test, const OracleOptions& options = {});

/// Smeared commutative kernel int chi1(r + s) chi2(r) phi3(r) d^2r. With
/// `twisted`, s = (nu2/2, -mu2/2), which puts the twist phase of the
/// quantum kernel inside the (mu1, nu1) average.
KernelValue classical_compose(const SchemeKernel& chi1, const SchemeKernel& chi2,
                              const SchemeKernel& phi3, const TomographicPoint& x1,
                              const TomographicPoint& x2, const TomographicPoint& x3,
                              const TestFunction& test, bool twisted,
                              const OracleOptions& options = {});

/// Closed-form quadratic kernel paired with the test function:
/// (2/(i pi^3)) e^{i(X1+X2)} e^{-i|m1-m2|^2/2} t(R/4 - X3) / 4.
cplx kernel_quadratic(const TomographicPoint& x1, const TomographicPoint& x2,
                      const TomographicPoint& x3, const TestFunction& test);

/// e^{(i/2)(nu1 mu2 - nu2 mu1)} K_cl.
cplx twist_apply(cplx k_classical, double mu1, double nu1, double mu2, double nu2);

enum class KernelMode { ClosedForm, Oracle };

/// Star-product kernel of a scheme, always evaluated against a test function.
/// Closed forms: quadratic (above), symplectic (twisted commutative kernel),
/// thick (window average of the symplectic kernel). Oracle: kernel_compose.
/// `classical` selects the commutative (pointwise product) kernel.
class KernelEvaluator {
 public:
  KernelEvaluator(SchemeSpec scheme, KernelMode mode, bool classical = false,
                  OracleOptions options = {});

  const SchemeSpec& scheme() const { return scheme_; }
  KernelMode mode() const { return mode_; }
  bool classical() const { return classical_; }

  KernelValue operator()(const TomographicPoint& x1, const TomographicPoint& x2,
                         const TomographicPoint& x3, const TestFunction& test) const;

  /// Same (x1, x2, mu3, nu3) with test functions centred at each X3 in
  /// `centres`; the Fourier modes are shared between centres.
  std::vector<KernelValue> batch(const TomographicPoint& x1, const TomographicPoint& x2,
                                 double mu3, double nu3, const std::vector<double>& centres,
                                 const TestFunction& test) const;

 private:
  SchemeSpec scheme_;
  KernelMode mode_;
  bool classical_;
  OracleOptions options_;
};

/// N_Xi^2 int Xi(Y) K_delta(x1, x2, (X3 - Y, mu3, nu3)) dY, smeared, where
/// K_delta is an ideal (symplectic) kernel evaluator.
KernelValue kernel_thick(const KernelEvaluator& k_delta, const WindowFunction& xi,
                         const TomographicPoint& x1, const TomographicPoint& x2,
                         const TomographicPoint& x3, const TestFunction& test);

}  // namespace tomo
