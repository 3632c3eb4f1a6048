#include "tomo/symplectic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

// Parameter interval [t0, t1] of the line o + t d inside the closed grid box.
bool clip_to_box(const PhaseSpaceGrid& g, double oq, double op, double dq, double dp, double& t0,
                 double& t1) {
  t0 = -std::numeric_limits<double>::infinity();
  t1 = std::numeric_limits<double>::infinity();
  auto slab = [&](double o, double d, double lo, double hi) {
    if (std::abs(d) < 1e-300) return o >= lo && o <= hi;
    double a = (lo - o) / d;
    double b = (hi - o) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    return t0 <= t1;
  };
  return slab(oq, dq, g.q_min, g.q_max) && slab(op, dp, g.p_min, g.p_max);
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

struct FftwBuffer {
  fftw_complex* data;
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  cplx* c() { return reinterpret_cast<cplx*>(data); }
};

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

cplx radon_forward(const PhaseSpaceFunction& f, const TomographicPoint& x, double tail_fraction) {
  const double r = std::hypot(x.mu, x.nu);
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorKind::DegenerateDirection, "(mu, nu) must be a nonzero finite direction");
  const PhaseSpaceGrid& g = f.grid();
  const double uq = x.mu / r;
  const double up = x.nu / r;
  const double s = x.X / r;
  const double oq = s * uq;
  const double op = s * up;
  const double eq = -up;
  const double ep = uq;

  double t0 = 0.0;
  double t1 = 0.0;
  if (!clip_to_box(g, oq, op, eq, ep, t0, t1) || t1 - t0 <= 0.0) return 0.0;

  const double h = 0.5 * std::min(g.dq(), g.dp());
  const int n = std::max(2, static_cast<int>(std::ceil((t1 - t0) / h)));
  const double step = (t1 - t0) / n;
  cplx sum = 0.0;
  cplx first = 0.0;
  cplx last = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + i * step;
    const cplx v = f.at(oq + t * eq, op + t * ep);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * v;
    if (i == 0) first = v;
    if (i == n) last = v;
  }
  const double scale = f.max_abs();
  if (scale > 0.0 && std::max(std::abs(first), std::abs(last)) > tail_fraction * scale)
    throw Error(ErrorKind::TruncatedSupport,
                "function does not decay inside the grid along the line X=" + std::to_string(x.X));
  return sum * step / r;
}

Tomogram radon_forward_grid(const PhaseSpaceFunction& f, std::span<const double> x_grid,
                            std::span<const double> theta_grid, double tail_fraction) {
  Tomogram w;
  w.scheme = Scheme::Symplectic;
  w.x_axis.assign(x_grid.begin(), x_grid.end());
  w.theta_axis.assign(theta_grid.begin(), theta_grid.end());
  w.points.reserve(x_grid.size() * theta_grid.size());
  w.values.reserve(x_grid.size() * theta_grid.size());
  for (double th : theta_grid) {
    const double mu = std::cos(th);
    const double nu = std::sin(th);
    for (double X : x_grid) {
      const TomographicPoint pt{X, mu, nu};
      w.points.push_back(pt);
      w.values.push_back(radon_forward(f, pt, tail_fraction));
    }
  }
  return w;
}

PhaseSpaceFunction radon_inverse(const Tomogram& w, const PhaseSpaceGrid& target) {
  if (w.scheme == Scheme::Quadratic || !w.has_theta_lattice())
    throw Error(ErrorKind::BadInput, "back-projection needs a symplectic X x theta lattice");
  const std::size_t n_theta = w.theta_axis.size();
  const std::size_t nx = w.x_axis.size();
  if (n_theta < 8)
    throw Error(ErrorKind::InsufficientAngles,
                "need at least 8 angles over [0, pi), got " + std::to_string(n_theta));
  if (nx < 4) throw Error(ErrorKind::InvalidCount, "need at least 4 X samples per slice");
  const double d = (w.x_axis.back() - w.x_axis.front()) / static_cast<double>(nx - 1);
  for (std::size_t i = 1; i < nx; ++i)
    if (std::abs(w.x_axis[i] - w.x_axis[i - 1] - d) > 1e-9 * std::max(1.0, std::abs(d)))
      throw Error(ErrorKind::BadInput, "X samples must be uniformly spaced");
  const double dtheta = kPi / static_cast<double>(n_theta);
  for (std::size_t t = 0; t < n_theta; ++t)
    if (std::abs(w.theta_axis[t] - w.theta_axis[0] - t * dtheta) > 1e-9)
      throw Error(ErrorKind::BadInput, "angles must uniformly cover [0, pi)");
  if (d > std::min(target.dq(), target.dp()) * (1.0 + 1e-9))
    throw Error(ErrorKind::AliasedSpectrum,
                "X spacing " + std::to_string(d) + " exceeds the target grid spacing");

  // Band-limited ramp filter: g = d * sum_j w_j h((i - j) d).
  const std::size_t m = next_pow2(2 * nx + 16);
  constexpr std::size_t kUp = 8;
  const std::size_t mu_len = m * kUp;
  const std::size_t offset = (m - nx) / 2;

  FftwBuffer kern(m);
  FftwBuffer buf(m);
  FftwBuffer fine(mu_len);
  FftwPlan p_kern, p_fwd, p_back;
  p_kern.plan = fftw_plan_dft_1d(static_cast<int>(m), kern.data, kern.data, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
  p_fwd.plan =
      fftw_plan_dft_1d(static_cast<int>(m), buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
  p_back.plan = fftw_plan_dft_1d(static_cast<int>(mu_len), fine.data, fine.data, FFTW_BACKWARD,
                                 FFTW_ESTIMATE);

  cplx* kc = kern.c();
  for (std::size_t i = 0; i < m; ++i) {
    const long n = i < m / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m);
    double h = 0.0;
    if (n == 0)
      h = kPi / (2.0 * d * d);
    else if (n % 2 != 0)
      h = -2.0 / (kPi * static_cast<double>(n * n) * d * d);
    kc[i] = h * d;
  }
  fftw_execute(p_kern.plan);

  // Hann roll-off over the top 20% of the band.
  const double nyq = static_cast<double>(m) / 2.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double k = i <= m / 2 ? static_cast<double>(i) : static_cast<double>(m - i);
    const double frac = k / nyq;
    if (frac > 0.8) kc[i] *= 0.5 * (1.0 + std::cos(kPi * (frac - 0.8) / 0.2));
  }

  const double x0 = w.x_axis.front() - static_cast<double>(offset) * d;
  const double fine_step = d / kUp;
  std::vector<std::vector<cplx>> filtered(n_theta, std::vector<cplx>(mu_len));
  cplx* bc = buf.c();
  cplx* fc = fine.c();
  for (std::size_t t = 0; t < n_theta; ++t) {
    std::fill(bc, bc + m, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < nx; ++i) bc[offset + i] = w.at_theta(t, i);
    fftw_execute(p_fwd.plan);
    for (std::size_t i = 0; i < m; ++i) bc[i] *= kc[i];
    // Spectral zero-padding gives the band-limited interpolant on a finer grid.
    std::fill(fc, fc + mu_len, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m / 2; ++i) fc[i] = bc[i];
    for (std::size_t i = m / 2 + 1; i < m; ++i) fc[mu_len - m + i] = bc[i];
    fc[m / 2] = 0.5 * bc[m / 2];
    fc[mu_len - m / 2] = 0.5 * bc[m / 2];
    fftw_execute(p_back.plan);
    const double norm = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < mu_len; ++i) filtered[t][i] = fc[i] * norm;
  }

  std::vector<double> cs(n_theta), sn(n_theta);
  for (std::size_t t = 0; t < n_theta; ++t) {
    cs[t] = std::cos(w.theta_axis[t]);
    sn[t] = std::sin(w.theta_axis[t]);
  }
  const double pref = dtheta / (2.0 * kPi);
  const double last = static_cast<double>(mu_len - 1);
  Eigen::MatrixXcd out(target.n_q, target.n_p);
  for (int i = 0; i < target.n_q; ++i) {
    const double q = target.q(i);
    for (int j = 0; j < target.n_p; ++j) {
      const double p = target.p(j);
      cplx acc = 0.0;
      for (std::size_t t = 0; t < n_theta; ++t) {
        const double pos = (q * cs[t] + p * sn[t] - x0) / fine_step;
        if (pos < 0.0 || pos > last) continue;
        const auto k = std::min(static_cast<std::size_t>(pos), mu_len - 2);
        const double frac = pos - static_cast<double>(k);
        acc += (1.0 - frac) * filtered[t][k] + frac * filtered[t][k + 1];
      }
      out(i, j) = pref * acc;
    }
  }
  return PhaseSpaceFunction(target, std::move(out));
}

}  // namespace tomo
