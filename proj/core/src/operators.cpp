#include "tomo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

namespace {

constexpr double kLeakage = 1e-6;
constexpr double kSpectrumFloor = 1e-9;
constexpr double kWindowScanStep = 0.01;
constexpr double kLineReach = 12.0;
constexpr double kLineStep = 0.05;
constexpr double kArcStep = 0.05;
constexpr double kFourierReach = 14.0;

void require_dim(int dim, int min_dim = 2) {
  if (dim < min_dim)
    throw Error(ErrorKind::InvalidDim, "dimension must be at least " + std::to_string(min_dim));
}

// exp(-i mu q - i nu p) = D(beta) with beta = (nu - i mu)/sqrt(2).
cplx fourier_beta(double mu, double nu) { return cplx(nu, -mu) / std::sqrt(2.0); }

Eigen::MatrixXcd parity_times(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd out = m;
  for (Eigen::Index n = 1; n < out.cols(); n += 2) out.col(n) = -out.col(n);
  return out;
}

// Weyl quantizer D_hat at (q, p) as a matrix.
Eigen::MatrixXcd weyl_D_matrix(double q, double p, int dim) {
  const cplx beta = std::sqrt(2.0) * cplx(q, p);
  return parity_times(displacement(beta, dim)) / kPi;
}

Operator symplectic_dequantizer(double X, double mu, double nu, int dim) {
  const double r = std::hypot(mu, nu);
  if (!(r > 0.0)) throw Error(ErrorKind::DegenerateDirection, "(mu, nu) must be nonzero");
  const double uq = mu / r;
  const double up = nu / r;
  const double s = X / r;
  const int n = static_cast<int>(std::lround(2.0 * kLineReach / kLineStep));
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i <= n; ++i) {
    const double t = -kLineReach + i * kLineStep;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * weyl_D_matrix(s * uq - t * up, s * up + t * uq, dim);
  }
  return {dim, acc * (kLineStep / r)};
}

Operator quadratic_dequantizer(const TomographicPoint& x, int dim) {
  if (!(x.X > 0.0)) return Operator::zero(dim);
  const double rad = std::sqrt(x.X);
  const int n = std::clamp(static_cast<int>(std::ceil(2.0 * kPi * rad / kArcStep)), 64, 4096);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * k / n;
    acc += weyl_D_matrix(x.mu + rad * std::cos(phi), x.nu + rad * std::sin(phi), dim);
  }
  return {dim, acc * (kPi / n)};
}

Operator thick_dequantizer(const WindowFunction& xi, const TomographicPoint& x, int dim) {
  const auto [lo, hi] = xi.support();
  const Rule1D rule =
      breakpoint_gauss_legendre(lo, hi, xi.breakpoints(), std::min(0.25, 0.5 * xi.scale()), 10);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double w = xi(rule.nodes[i]);
    if (w == 0.0) continue;
    acc += rule.weights[i] * w *
           symplectic_dequantizer(x.X - rule.nodes[i], x.mu, x.nu, dim).matrix;
  }
  return {dim, acc};
}

// Trapezoid transform along X of one fixed-direction slice.
cplx slice_fourier(const Tomogram& w, std::size_t t, double k) {
  const std::size_t nx = w.x_axis.size();
  cplx acc = 0.0;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    const double h = w.x_axis[i + 1] - w.x_axis[i];
    acc += 0.5 * h *
           (w.at_theta(t, i) * std::exp(kI * (k * w.x_axis[i])) +
            w.at_theta(t, i + 1) * std::exp(kI * (k * w.x_axis[i + 1])));
  }
  return acc;
}

Operator fourier_slice_reconstruct(const Tomogram& w, const WindowFunction* xi, int dim) {
  if (!w.has_theta_lattice() || w.x_axis.size() < 2)
    throw Error(ErrorKind::BadInput, "reconstruction needs an X x theta lattice");
  const std::size_t n_theta = w.theta_axis.size();
  if (n_theta < 8)
    throw Error(ErrorKind::InsufficientAngles, "need at least 8 angles over [0, pi)");
  const double dtheta = kPi / static_cast<double>(n_theta);
  const Rule1D rule = composite_gauss_legendre(0.0, kFourierReach, 14, 10);
  const std::size_t nk = rule.nodes.size();
  // slice spectra at +-k for every node, theta-major
  std::vector<cplx> spec(n_theta * nk * 2);
  double peak = 0.0;
  for (std::size_t t = 0; t < n_theta; ++t) {
    peak = std::max(peak, std::abs(slice_fourier(w, t, 0.0)));
    for (std::size_t i = 0; i < nk; ++i)
      for (int s = 0; s < 2; ++s)
        spec[(t * nk + i) * 2 + s] = slice_fourier(w, t, s ? -rule.nodes[i] : rule.nodes[i]);
  }
  // Thick slices below the sampling noise floor carry no information; above
  // it the window spectrum must stay clear of zero.
  const double floor = kSpectrumFloor * peak;
  if (xi) {
    double k_info = 0.0;
    for (std::size_t j = 0; j < spec.size(); ++j)
      if (std::abs(spec[j]) >= floor) k_info = std::max(k_info, rule.nodes[(j / 2) % nk]);
    const double x0 = std::abs(xi->fourier(0.0));
    cplx prev = xi->fourier(0.0);
    for (double k = kWindowScanStep; k <= k_info + kWindowScanStep; k += kWindowScanStep) {
      const cplx cur = xi->fourier(k);
      const bool crosses = prev.real() * cur.real() < 0.0 && std::abs(cur.imag()) < 1e-12 * x0;
      if (std::abs(cur) < 1e-6 * x0 || crosses)
        throw Error(ErrorKind::SingularWindow,
                    "window spectrum vanishes where the thick tomogram does not");
      prev = cur;
    }
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t t = 0; t < n_theta; ++t) {
    const double uq = std::cos(w.theta_axis[t]);
    const double up = std::sin(w.theta_axis[t]);
    for (std::size_t i = 0; i < nk; ++i) {
      for (int s = 0; s < 2; ++s) {
        const double k = s ? -rule.nodes[i] : rule.nodes[i];
        cplx wk = spec[(t * nk + i) * 2 + s];
        if (xi) {
          if (std::abs(wk) < floor) continue;
          wk /= xi->fourier(k);
        }
        acc += (rule.weights[i] * rule.nodes[i]) * wk *
               displacement(fourier_beta(k * uq, k * up), dim);
      }
    }
  }
  return {dim, acc * (dtheta / (2.0 * kPi))};
}

}  // namespace

const WindowFunction& SchemeSpec::require_window() const {
  if (!window) throw Error(ErrorKind::BadInput, "thick scheme needs a window");
  return *window;
}

Operator Operator::zero(int dim) {
  require_dim(dim, 1);
  return {dim, Eigen::MatrixXcd::Zero(dim, dim)};
}

Operator Operator::identity(int dim) {
  require_dim(dim, 1);
  return {dim, Eigen::MatrixXcd::Identity(dim, dim)};
}

std::pair<Operator, Operator> ladder_ops(int dim) {
  require_dim(dim);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {{dim, a}, {dim, a.adjoint()}};
}

Operator position_op(int dim) {
  const auto [a, ad] = ladder_ops(dim);
  return {dim, (a.matrix + ad.matrix) / std::sqrt(2.0)};
}

Operator momentum_op(int dim) {
  const auto [a, ad] = ladder_ops(dim);
  return {dim, (a.matrix - ad.matrix) / (kI * std::sqrt(2.0))};
}

Operator number_op(int dim) {
  const auto [a, ad] = ladder_ops(dim);
  return {dim, ad.matrix * a.matrix};
}

Operator parity(int dim) {
  require_dim(dim, 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return {dim, m};
}

Eigen::MatrixXcd displacement(cplx beta, int dim) {
  require_dim(dim, 1);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  const double x = std::norm(beta);
  if (x == 0.0) return Eigen::MatrixXcd::Identity(dim, dim);
  const double log_abs = 0.5 * std::log(x);
  const double arg = std::arg(beta);
  std::vector<double> lag(static_cast<std::size_t>(dim));
  for (int diff = 0; diff < dim; ++diff) {
    // L_k^{(diff)}(x), k = 0 .. dim-1-diff.
    const int kmax = dim - 1 - diff;
    lag[0] = 1.0;
    if (kmax >= 1) lag[1] = 1.0 + diff - x;
    for (int k = 1; k < kmax; ++k)
      lag[k + 1] = ((2.0 * k + 1.0 + diff - x) * lag[k] - (k + diff) * lag[k - 1]) / (k + 1.0);
    const cplx below = std::exp(kI * (diff * arg));
    const cplx above = std::exp(kI * (diff * (kPi - arg)));
    for (int k = 0; k <= kmax; ++k) {
      const double mag = std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + diff + 1.0)) +
                                  diff * log_abs - 0.5 * x) *
                         lag[k];
      d(k + diff, k) = mag * below;
      if (diff > 0) d(k, k + diff) = mag * above;
    }
  }
  return d;
}

Operator weyl_D(double q, double p, int dim) {
  require_dim(dim, 1);
  return {dim, weyl_D_matrix(q, p, dim)};
}

double displacement_leakage(double q, double p, int dim) {
  // Poisson weight of D(2 alpha)|0> on levels >= dim - 1; for retained
  // displacements this is dominated by the top level itself.
  const double x = 2.0 * (q * q + p * p);
  const int n = dim - 1;
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const int stop = n + 60 + static_cast<int>(x + 12.0 * std::sqrt(x));
  double tail = 0.0;
  for (int k = n; k <= stop; ++k) tail += std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
  return std::min(tail, 1.0);
}

Operator weyl_D_checked(double q, double p, int dim) {
  const double leak = displacement_leakage(q, p, dim);
  if (leak > kLeakage)
    throw Error(ErrorKind::LeakageExceeded, "displacement to (" + std::to_string(q) + ", " +
                                                std::to_string(p) + ") leaks " +
                                                std::to_string(leak) + " beyond dim " +
                                                std::to_string(dim));
  return weyl_D(q, p, dim);
}

cplx weyl_symbol(const Operator& a, double q, double p) {
  const Eigen::MatrixXcd d = weyl_D_matrix(q, p, a.dim);
  return 2.0 * kPi * (a.matrix.cwiseProduct(d.transpose())).sum();
}

PhaseSpaceFunction weyl_symbol_grid(const Operator& a, const PhaseSpaceGrid& grid) {
  return PhaseSpaceFunction::sample([a](double q, double p) { return weyl_symbol(a, q, p); }, grid,
                                    AnalyticTag::Custom);
}

Operator weyl_reconstruct(const PhaseSpaceFunction& f, int dim, double tail_tol) {
  require_dim(dim, 1);
  const double scale = f.max_abs();
  if (scale == 0.0) return Operator::zero(dim);
  if (f.boundary_max_abs() > tail_tol * scale)
    throw Error(ErrorKind::TruncatedSupport, "symbol does not decay inside the grid");
  const PhaseSpaceGrid& g = f.grid();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < g.n_q; ++i) {
    const double wq = (i == 0 || i == g.n_q - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.n_p; ++j) {
      const cplx v = f.values()(i, j);
      if (std::abs(v) < 1e-18 * scale) continue;
      const double wp = (j == 0 || j == g.n_p - 1) ? 0.5 : 1.0;
      acc += (wq * wp) * v * weyl_D_matrix(g.q(i), g.p(j), dim);
    }
  }
  return {dim, acc * (g.dq() * g.dp())};
}

Operator density_matrix(const StateSpec& spec, int dim) {
  spec.validate();
  require_dim(dim, 1);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  double kept = 0.0;
  switch (spec.kind) {
    case StateKind::Coherent: {
      Eigen::VectorXcd psi(dim);
      const double a2 = std::norm(spec.alpha);
      for (int n = 0; n < dim; ++n) {
        const double mag = std::exp(-0.5 * a2 + (n == 0 ? 0.0 : n * 0.5 * std::log(a2)) -
                                    0.5 * std::lgamma(n + 1.0));
        psi(n) = (a2 == 0.0 && n > 0) ? cplx(0.0) : mag * std::exp(kI * (n * std::arg(spec.alpha)));
      }
      rho = psi * psi.adjoint();
      kept = psi.squaredNorm();
      break;
    }
    case StateKind::Fock:
      if (spec.n >= dim)
        throw Error(ErrorKind::LeakageExceeded, "Fock level exceeds the truncation");
      rho(spec.n, spec.n) = 1.0;
      kept = 1.0;
      break;
    case StateKind::Thermal: {
      const double r = spec.nbar / (spec.nbar + 1.0);
      for (int n = 0; n < dim; ++n) {
        rho(n, n) = std::pow(r, n) / (spec.nbar + 1.0);
        kept += rho(n, n).real();
      }
      break;
    }
    case StateKind::GaussianClassical: {
      const double sd = std::sqrt(std::max(spec.cov(0, 0), spec.cov(1, 1)));
      const double reach = 9.0 * sd + 1.0;
      const int n = std::clamp(static_cast<int>(std::ceil(2.0 * reach / 0.1)) + 1, 81, 401);
      const PhaseSpaceGrid g = make_grid(spec.mean(0) - reach, spec.mean(0) + reach,
                                         spec.mean(1) - reach, spec.mean(1) + reach, n, n);
      rho = weyl_reconstruct(eval_state(spec, g).scaled(2.0 * kPi), dim).matrix;
      kept = rho.trace().real();
      break;
    }
  }
  if (1.0 - kept > kLeakage)
    throw Error(ErrorKind::LeakageExceeded,
                "state leaves " + std::to_string(1.0 - kept) + " of its weight beyond dim " +
                    std::to_string(dim));
  return {dim, rho};
}

Operator scheme_dequantizer(const SchemeSpec& scheme, const TomographicPoint& x, int dim) {
  require_dim(dim, 1);
  switch (scheme.scheme) {
    case Scheme::Symplectic: return symplectic_dequantizer(x.X, x.mu, x.nu, dim);
    case Scheme::Thick: return thick_dequantizer(scheme.require_window(), x, dim);
    case Scheme::Quadratic: return quadratic_dequantizer(x, dim);
  }
  throw Error(ErrorKind::BadInput, "unknown scheme");
}

Operator scheme_quantizer(const SchemeSpec& scheme, const TomographicPoint& x, int dim) {
  require_dim(dim, 1);
  switch (scheme.scheme) {
    case Scheme::Symplectic:
    case Scheme::Thick: {
      // 2 pi * (1/4 pi^2) e^{iX} exp(-i mu q - i nu p)
      cplx pref = std::exp(kI * x.X) / (2.0 * kPi);
      if (scheme.scheme == Scheme::Thick) pref *= scheme.require_window().normalization();
      return {dim, pref * displacement(fourier_beta(x.mu, x.nu), dim)};
    }
    case Scheme::Quadratic: {
      // int e^{-i r^2} D_hat(r) dr = (-i)^n / (1 + i) on |n>; shifted to (mu, nu).
      Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
      cplx ph = 1.0 / cplx(1.0, 1.0);
      for (int n = 0; n < dim; ++n) {
        q(n, n) = ph;
        ph *= -kI;
      }
      const Eigen::MatrixXcd d = displacement(cplx(x.mu, x.nu) / std::sqrt(2.0), dim);
      const cplx pref = 2.0 * scheme.c * std::exp(kI * x.X);
      return {dim, pref * d * q * d.adjoint()};
    }
  }
  throw Error(ErrorKind::BadInput, "unknown scheme");
}

cplx tomographic_symbol(const Operator& a, const SchemeSpec& scheme, const TomographicPoint& x) {
  const Operator phi = scheme_dequantizer(scheme, x, a.dim);
  return (a.matrix.cwiseProduct(phi.matrix.transpose())).sum();
}

Operator operator_from_tomogram(const Tomogram& w, const SchemeSpec& scheme, int dim) {
  require_dim(dim, 1);
  switch (scheme.scheme) {
    case Scheme::Symplectic: return fourier_slice_reconstruct(w, nullptr, dim);
    case Scheme::Thick: return fourier_slice_reconstruct(w, &scheme.require_window(), dim);
    case Scheme::Quadratic: {
      const PhaseSpaceGrid g = make_grid(-8.0, 8.0, -8.0, 8.0, 161, 161);
      QuadraticInverseOptions opt;
      opt.c = scheme.c;
      const PhaseSpaceFunction wig = quadratic_inverse(w, g, opt);
      return weyl_reconstruct(wig.scaled(2.0 * kPi), dim, 1e-2);
    }
  }
  throw Error(ErrorKind::BadInput, "unknown scheme");
}

}  // namespace tomo
