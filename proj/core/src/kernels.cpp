#include "tomo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

using Eigen::Matrix2cd;
using Eigen::Vector2d;

const Matrix2cd kJ = (Matrix2cd() << 0.0, 1.0, -1.0, 0.0).finished();

bool plane_wave(Scheme s) { return s != Scheme::Quadratic; }

cplx chi_prefactor(const SchemeKernel& k) {
  switch (k.scheme.scheme) {
    case Scheme::Symplectic: return k.amplitude / (4.0 * kPi * kPi);
    case Scheme::Thick:
      return k.amplitude * k.scheme.require_window().normalization() / (4.0 * kPi * kPi);
    case Scheme::Quadratic: return k.amplitude * k.scheme.c / kPi;
  }
  return 0.0;
}

class FormBuilder {
 public:
  explicit FormBuilder(int slots) {
    form_.a = Eigen::MatrixXcd::Zero(2 * slots, 2 * slots);
    form_.b = Eigen::VectorXcd::Zero(2 * slots);
  }
  void add_block(int i, int j, const Matrix2cd& m) { form_.a.block<2, 2>(2 * i, 2 * j) += m; }
  void add_linear(int i, const Eigen::Vector2cd& v) { form_.b.segment<2>(2 * i) += v; }
  void add_log(cplx c) { form_.log_c += c; }
  const GaussianForm& form() const { return form_; }

 private:
  GaussianForm form_;
};

Eigen::Vector2cd cvec(const Vector2d& v) { return v.cast<cplx>(); }

// chi(r + shift, x) on slot `slot`, optionally averaged over (mu, nu).
void add_chi(FormBuilder& fb, int slot, const SchemeKernel& k, const TomographicPoint& x,
             double eps_m, const Vector2d& shift) {
  const Matrix2cd id = Matrix2cd::Identity();
  Vector2d m(x.mu, x.nu);
  fb.add_log(std::log(chi_prefactor(k)));
  if (plane_wave(k.scheme.scheme)) {
    // e^{iX} e^{-i m.(r+s)} e^{-eps^2 |r+s|^2 / 2}
    fb.add_block(slot, slot, eps_m * eps_m * id);
    fb.add_linear(slot, -kI * cvec(m) - eps_m * eps_m * cvec(shift));
    fb.add_log(kI * (x.X - m.dot(shift)) - 0.5 * eps_m * eps_m * shift.squaredNorm());
  } else {
    // e^{i(X - |r - m'|^2)}, m' = m - s
    m -= shift;
    fb.add_block(slot, slot, 2.0 * kI * id);
    fb.add_linear(slot, 2.0 * kI * cvec(m));
    fb.add_log(kI * (x.X - m.squaredNorm()));
  }
}

// Fourier mode e^{i k g(r)} of the dequantizer's delta argument g.
void add_phi_mode(FormBuilder& fb, int slot, const SchemeKernel& k, const TomographicPoint& x,
                  double kk) {
  const Vector2d m(x.mu, x.nu);
  fb.add_log(std::log(k.amplitude));
  if (plane_wave(k.scheme.scheme)) {
    fb.add_linear(slot, kI * kk * cvec(m));
  } else {
    fb.add_block(slot, slot, -2.0 * kI * kk * Matrix2cd::Identity());
    fb.add_linear(slot, -2.0 * kI * kk * cvec(m));
    fb.add_log(kI * kk * m.squaredNorm());
  }
}

void add_groenewald(FormBuilder& fb) {
  // -1/2 v^T A v reproduces 2i(r1 J r2 + r2 J r3 + r3 J r1).
  const Matrix2cd c = 2.0 * kI * kJ;
  fb.add_block(0, 1, -c);
  fb.add_block(1, 0, c);
  fb.add_block(1, 2, -c);
  fb.add_block(2, 1, c);
  fb.add_block(2, 0, -c);
  fb.add_block(0, 2, c);
  fb.add_log(-2.0 * std::log(kPi));
}

cplx phi_weight(const SchemeKernel& phi, double k) {
  if (phi.scheme.scheme == Scheme::Thick) return phi.scheme.require_window().fourier(k);
  return 1.0;
}

using ModeFn = std::function<cplx(double k, double sigma)>;

struct ModeProblem {
  ModeFn mode;
  const SchemeKernel* phi;
  bool gaussian_in_k;  // log J is quadratic in k
};

Rule1D panel_rule(double a, double b, double width, int order) {
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-9)));
  return composite_gauss_legendre(a, b, panels, order);
}

// (1/2pi) int dk t_hat(k) w3(k) J(k) for every test centre, extrapolated in
// the damping level.
std::vector<KernelValue> integrate_modes(const ModeProblem& p, const std::vector<double>& centres,
                                         const TestFunction& test, const OracleOptions& opt) {
  if (!(test.eps > 0.0)) throw Error(ErrorKind::BadInput, "test function width must be positive");
  double a = -opt.reach / test.eps;
  double b = opt.reach / test.eps;
  double width = opt.panel;
  if (p.gaussian_in_k) {
    // log|J| = c0 + c1 k + c2 k^2: keep the window where J is not negligible.
    const double l0 = std::log(std::abs(p.mode(0.0, 0.0)) + 1e-300);
    const double lp = std::log(std::abs(p.mode(1.0, 0.0)) + 1e-300);
    const double lm = std::log(std::abs(p.mode(-1.0, 0.0)) + 1e-300);
    const double c2 = 0.5 * (lp + lm) - l0;
    const double c1 = 0.5 * (lp - lm);
    if (c2 < -1e-12) {
      const double centre = -c1 / (2.0 * c2);
      const double sd = std::sqrt(-0.5 / c2);
      a = std::max(a, centre - 12.0 * sd);
      b = std::min(b, centre + 12.0 * sd);
      width = std::min(width, 0.5 * sd);
    }
  }
  std::vector<KernelValue> out(centres.size());
  if (!(b > a)) return out;

  const Rule1D fine = panel_rule(a, b, width, opt.order);
  const Rule1D coarse = panel_rule(a, b, 2.0 * width, opt.order);
  std::vector<double> levels = opt.damping;
  if (levels.empty()) levels.push_back(0.0);

  auto sum_rule = [&](const Rule1D& rule, double sigma, std::vector<cplx>& acc) {
    acc.assign(centres.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double k = rule.nodes[i];
      const cplx base = rule.weights[i] * test.spectrum(k) * phi_weight(*p.phi, k) * p.mode(k, sigma);
      for (std::size_t c = 0; c < centres.size(); ++c)
        acc[c] += base * std::exp(-kI * (k * centres[c]));
    }
    for (cplx& v : acc) v /= 2.0 * kPi;
  };

  std::vector<std::vector<cplx>> fine_vals(levels.size()), coarse_vals(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    sum_rule(fine, levels[l], fine_vals[l]);
    sum_rule(coarse, levels[l], coarse_vals[l]);
  }
  for (std::size_t c = 0; c < centres.size(); ++c) {
    std::vector<cplx> f(levels.size()), h(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      f[l] = fine_vals[l][c];
      h[l] = coarse_vals[l][c];
    }
    cplx value = f.back();
    double resid = 0.0;
    cplx half = h.back();
    if (levels.size() > 1) {
      const Extrapolation ef = richardson_sigma2(levels, f);
      const Extrapolation eh = richardson_sigma2(levels, h);
      value = ef.value;
      resid = ef.residual;
      half = eh.value;
    }
    if (resid > opt.tol * std::abs(value) + 1e-14)
      throw Error(ErrorKind::NonConvergent,
                  "damping extrapolation residual " + std::to_string(resid) + " for kernel value " +
                      std::to_string(std::abs(value)));
    out[c] = {value, std::abs(value - half) + resid};
  }
  return out;
}

void require_smearing(const SchemeKernel& chi1, const TestFunction& test) {
  if (plane_wave(chi1.scheme.scheme) && !(test.eps_m > 0.0))
    throw Error(ErrorKind::UnsmearedKernel,
                "symplectic/thick kernels are distributions in (mu, nu); set a positive eps_m");
}

std::vector<KernelValue> compose_batch(const SchemeKernel& chi1, const SchemeKernel& chi2,
                                       const SchemeKernel& phi3, const TomographicPoint& x1,
                                       const TomographicPoint& x2, double mu3, double nu3,
                                       const std::vector<double>& centres, const TestFunction& test,
                                       const OracleOptions& opt) {
  if (chi1.amplitude == 0.0 || chi2.amplitude == 0.0 || phi3.amplitude == 0.0)
    return std::vector<KernelValue>(centres.size());
  require_smearing(chi1, test);
  const TomographicPoint x3{0.0, mu3, nu3};
  const double eps_m = plane_wave(chi1.scheme.scheme) ? test.eps_m : 0.0;
  FormBuilder base(3);
  add_groenewald(base);
  add_chi(base, 0, chi1, x1, eps_m, Vector2d::Zero());
  add_chi(base, 1, chi2, x2, 0.0, Vector2d::Zero());
  const GaussianForm fixed = base.form();
  ModeProblem p;
  p.phi = &phi3;
  p.gaussian_in_k = plane_wave(phi3.scheme.scheme);
  p.mode = [&](double k, double sigma) {
    FormBuilder fb(3);
    add_phi_mode(fb, 2, phi3, x3, k);
    GaussianForm g = fixed;
    g.a += fb.form().a;
    g.b += fb.form().b;
    g.log_c += fb.form().log_c;
    g.a += sigma * sigma * Eigen::MatrixXcd::Identity(6, 6);
    return gaussian_integral(g);
  };
  return integrate_modes(p, centres, test, opt);
}

std::vector<KernelValue> classical_batch(const SchemeKernel& chi1, const SchemeKernel& chi2,
                                         const SchemeKernel& phi3, const TomographicPoint& x1,
                                         const TomographicPoint& x2, double mu3, double nu3,
                                         const std::vector<double>& centres,
                                         const TestFunction& test, bool twisted,
                                         const OracleOptions& opt) {
  if (chi1.amplitude == 0.0 || chi2.amplitude == 0.0 || phi3.amplitude == 0.0)
    return std::vector<KernelValue>(centres.size());
  require_smearing(chi1, test);
  const TomographicPoint x3{0.0, mu3, nu3};
  const double eps_m = plane_wave(chi1.scheme.scheme) ? test.eps_m : 0.0;
  const Vector2d shift = twisted ? Vector2d(0.5 * x2.nu, -0.5 * x2.mu) : Vector2d::Zero();
  FormBuilder base(1);
  add_chi(base, 0, chi1, x1, eps_m, shift);
  add_chi(base, 0, chi2, x2, 0.0, Vector2d::Zero());
  const GaussianForm fixed = base.form();
  ModeProblem p;
  p.phi = &phi3;
  p.gaussian_in_k = plane_wave(phi3.scheme.scheme) && plane_wave(chi1.scheme.scheme) &&
                    plane_wave(chi2.scheme.scheme);
  p.mode = [&](double k, double sigma) {
    FormBuilder fb(1);
    add_phi_mode(fb, 0, phi3, x3, k);
    GaussianForm g = fixed;
    g.a += fb.form().a;
    g.b += fb.form().b;
    g.log_c += fb.form().log_c;
    g.a += sigma * sigma * Eigen::MatrixXcd::Identity(2, 2);
    return gaussian_integral(g);
  };
  return integrate_modes(p, centres, test, opt);
}

SchemeKernel as_delta(const SchemeSpec& s) {
  SchemeSpec out = s;
  if (out.scheme == Scheme::Thick) {
    out.scheme = Scheme::Symplectic;
    out.window.reset();
  }
  return {out, 1.0};
}

}  // namespace

cplx groenewald(double q1, double p1, double q2, double p2, double q3, double p3) {
  const double phase =
      2.0 * ((q1 * p2 - q2 * p1) + (q2 * p3 - q3 * p2) + (q3 * p1 - q1 * p3));
  return std::exp(kI * phase) / (kPi * kPi);
}

KernelValue kernel_compose(const SchemeKernel& chi1, const SchemeKernel& chi2,
                           const SchemeKernel& phi3, const TomographicPoint& x1,
                           const TomographicPoint& x2, const TomographicPoint& x3,
                           const TestFunction& test, const OracleOptions& options) {
  return compose_batch(chi1, chi2, phi3, x1, x2, x3.mu, x3.nu, {x3.X}, test, options).front();
}

KernelValue classical_compose(const SchemeKernel& chi1, const SchemeKernel& chi2,
                              const SchemeKernel& phi3, const TomographicPoint& x1,
                              const TomographicPoint& x2, const TomographicPoint& x3,
                              const TestFunction& test, bool twisted,
                              const OracleOptions& options) {
  return classical_batch(chi1, chi2, phi3, x1, x2, x3.mu, x3.nu, {x3.X}, test, twisted, options)
      .front();
}

cplx kernel_quadratic(const TomographicPoint& x1, const TomographicPoint& x2,
                      const TomographicPoint& x3, const TestFunction& test) {
  const double a = x1.mu + x2.mu - 2.0 * x3.mu + x2.nu - x1.nu;
  const double b = x1.nu + x2.nu - 2.0 * x3.nu + x1.mu - x2.mu;
  const double support = 0.25 * (a * a + b * b);
  const double dm2 = (x1.mu - x2.mu) * (x1.mu - x2.mu) + (x1.nu - x2.nu) * (x1.nu - x2.nu);
  const cplx pref = 2.0 / (kI * kPi * kPi * kPi);
  return pref * std::exp(kI * (x1.X + x2.X - 0.5 * dm2)) * 0.25 * test(support - x3.X);
}

cplx twist_apply(cplx k_classical, double mu1, double nu1, double mu2, double nu2) {
  return std::exp(0.5 * kI * (nu1 * mu2 - nu2 * mu1)) * k_classical;
}

KernelEvaluator::KernelEvaluator(SchemeSpec scheme, KernelMode mode, bool classical,
                                 OracleOptions options)
    : scheme_(std::move(scheme)), mode_(mode), classical_(classical), options_(std::move(options)) {
  if (scheme_.scheme == Scheme::Thick) scheme_.require_window();
}

KernelValue KernelEvaluator::operator()(const TomographicPoint& x1, const TomographicPoint& x2,
                                        const TomographicPoint& x3,
                                        const TestFunction& test) const {
  return batch(x1, x2, x3.mu, x3.nu, {x3.X}, test).front();
}

std::vector<KernelValue> KernelEvaluator::batch(const TomographicPoint& x1,
                                                const TomographicPoint& x2, double mu3, double nu3,
                                                const std::vector<double>& centres,
                                                const TestFunction& test) const {
  const SchemeKernel k{scheme_, 1.0};
  if (mode_ == KernelMode::Oracle) {
    if (classical_)
      return classical_batch(k, k, k, x1, x2, mu3, nu3, centres, test, false, options_);
    return compose_batch(k, k, k, x1, x2, mu3, nu3, centres, test, options_);
  }
  switch (scheme_.scheme) {
    case Scheme::Symplectic:
      return classical_batch(k, k, k, x1, x2, mu3, nu3, centres, test, !classical_, options_);
    case Scheme::Thick: {
      const KernelEvaluator ideal(as_delta(scheme_).scheme, KernelMode::ClosedForm, classical_,
                                  options_);
      std::vector<KernelValue> out;
      for (double c : centres)
        out.push_back(kernel_thick(ideal, *scheme_.window, x1, x2, {c, mu3, nu3}, test));
      return out;
    }
    case Scheme::Quadratic: {
      if (classical_)
        return classical_batch(k, k, k, x1, x2, mu3, nu3, centres, test, false, options_);
      std::vector<KernelValue> out;
      for (double c : centres) out.push_back({kernel_quadratic(x1, x2, {c, mu3, nu3}, test), 0.0});
      return out;
    }
  }
  throw Error(ErrorKind::BadInput, "unknown scheme");
}

KernelValue kernel_thick(const KernelEvaluator& k_delta, const WindowFunction& xi,
                         const TomographicPoint& x1, const TomographicPoint& x2,
                         const TomographicPoint& x3, const TestFunction& test) {
  if (k_delta.scheme().scheme != Scheme::Symplectic)
    throw Error(ErrorKind::BadInput, "kernel_thick smears an ideal symplectic kernel");
  const cplx n = xi.normalization();
  const auto [lo, hi] = xi.support();
  const Rule1D rule =
      breakpoint_gauss_legendre(lo, hi, xi.breakpoints(), std::min(0.25, 0.5 * xi.scale()), 10);
  std::vector<double> centres;
  std::vector<double> weights;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double w = xi(rule.nodes[i]);
    if (w == 0.0) continue;
    centres.push_back(x3.X - rule.nodes[i]);
    weights.push_back(rule.weights[i] * w);
  }
  const std::vector<KernelValue> vals = k_delta.batch(x1, x2, x3.mu, x3.nu, centres, test);
  KernelValue out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out.value += weights[i] * vals[i].value;
    out.error_estimate += weights[i] * vals[i].error_estimate;
  }
  out.value *= n * n;
  out.error_estimate *= std::norm(n);
  return out;
}

}  // namespace tomo
