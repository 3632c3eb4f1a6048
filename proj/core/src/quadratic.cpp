#include "tomo/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

namespace {

constexpr double kTailFraction = 1e-6;

// Per-tile maxima of |f| over the grid, dilated by one tile, to skip circles
// that only cross negligible regions.
class TileBound {
 public:
  TileBound(const PhaseSpaceFunction& f, double tile) : g_(f.grid()), tile_(tile) {
    nq_ = static_cast<int>(std::ceil((g_.q_max - g_.q_min) / tile)) + 1;
    np_ = static_cast<int>(std::ceil((g_.p_max - g_.p_min) / tile)) + 1;
    std::vector<double> raw(static_cast<std::size_t>(nq_ * np_), 0.0);
    for (int i = 0; i < g_.n_q; ++i)
      for (int j = 0; j < g_.n_p; ++j) {
        const int a = index_q(g_.q(i));
        const int b = index_p(g_.p(j));
        double& m = raw[static_cast<std::size_t>(a * np_ + b)];
        m = std::max(m, std::abs(f.values()(i, j)));
      }
    max_.assign(raw.size(), 0.0);
    for (int a = 0; a < nq_; ++a)
      for (int b = 0; b < np_; ++b) {
        double m = 0.0;
        for (int da = -1; da <= 1; ++da)
          for (int db = -1; db <= 1; ++db) {
            const int aa = a + da;
            const int bb = b + db;
            if (aa >= 0 && aa < nq_ && bb >= 0 && bb < np_)
              m = std::max(m, raw[static_cast<std::size_t>(aa * np_ + bb)]);
          }
        max_[static_cast<std::size_t>(a * np_ + b)] = m;
      }
    edge_ = f.boundary_max_abs();
  }

  double at(double q, double p) const {
    if (!g_.contains(q, p)) return edge_;
    return max_[static_cast<std::size_t>(index_q(q) * np_ + index_p(p))];
  }
  double tile() const { return tile_; }

 private:
  int index_q(double q) const {
    return std::clamp(static_cast<int>((q - g_.q_min) / tile_), 0, nq_ - 1);
  }
  int index_p(double p) const {
    return std::clamp(static_cast<int>((p - g_.p_min) / tile_), 0, np_ - 1);
  }

  PhaseSpaceGrid g_;
  double tile_;
  int nq_ = 0;
  int np_ = 0;
  std::vector<double> max_;
  double edge_ = 0.0;
};

struct CircleSampler {
  const PhaseSpaceFunction& f;
  double threshold;
  double spacing;
  std::shared_ptr<const TileBound> bound;
  double negligible;

  cplx operator()(const TomographicPoint& x) const {
    if (!(x.X > 0.0)) return 0.0;
    const PhaseSpaceGrid& g = f.grid();
    const double r = std::sqrt(x.X);
    if (bound) {
      const int n_tiles =
          std::max(8, static_cast<int>(std::ceil(2.0 * kPi * r / bound->tile())));
      double m = 0.0;
      for (int k = 0; k < n_tiles && m <= negligible; ++k) {
        const double phi = 2.0 * kPi * k / n_tiles;
        m = std::max(m, bound->at(x.mu + r * std::cos(phi), x.nu + r * std::sin(phi)));
      }
      if (m <= negligible) return 0.0;
    }
    const int n = std::clamp(static_cast<int>(std::ceil(2.0 * kPi * r / spacing)), 32, 1024);
    cplx sum = 0.0;
    double outside = 0.0;
    bool left_grid = false;
    for (int k = 0; k < n; ++k) {
      const double phi = 2.0 * kPi * k / n;
      const double q = x.mu + r * std::cos(phi);
      const double p = x.nu + r * std::sin(phi);
      const cplx v = f.at(q, p);
      if (!g.contains(q, p)) {
        left_grid = true;
        outside = std::max(outside, std::abs(v));
      }
      sum += v;
    }
    if (left_grid) {
      const double leak = f.has_exact() ? outside : f.boundary_max_abs();
      if (leak > threshold)
        throw Error(ErrorKind::TruncatedSupport,
                    "circle of squared radius " + std::to_string(x.X) + " leaves the grid");
    }
    return 0.5 * sum * (2.0 * kPi / n);
  }
};

// The integrand is periodic in the angle, so the trapezoid rule converges
// geometrically once features are resolved: four grid cells of arc for exact
// functions, two for interpolated samples.
CircleSampler make_sampler(const PhaseSpaceFunction& f, double tail_fraction = kTailFraction,
                           bool skip_negligible = false) {
  const double cell = std::min(f.grid().dq(), f.grid().dp());
  CircleSampler s{f, tail_fraction * f.max_abs(), (f.has_exact() ? 4.0 : 2.0) * cell, nullptr, 0.0};
  if (skip_negligible) {
    s.bound = std::make_shared<TileBound>(f, std::max(0.5, 2.0 * cell));
    s.negligible = 1e-15 * f.max_abs();
  }
  return s;
}

double axis_step(const std::vector<double>& a, const char* name) {
  if (a.size() < 2) throw Error(ErrorKind::InvalidCount, std::string(name) + " axis needs >= 2 samples");
  const double h = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs(a[i] - a[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw Error(ErrorKind::BadInput, std::string(name) + " axis must be uniformly spaced");
  return h;
}

}  // namespace

cplx circle_forward(const PhaseSpaceFunction& f, const TomographicPoint& x) {
  return make_sampler(f)(x);
}

Tomogram circle_forward_grid(const PhaseSpaceFunction& f, std::span<const double> x_grid,
                             std::span<const double> mu_grid, std::span<const double> nu_grid,
                             double tail_fraction) {
  const CircleSampler sample = make_sampler(f, tail_fraction, true);
  Tomogram w;
  w.scheme = Scheme::Quadratic;
  w.x_axis.assign(x_grid.begin(), x_grid.end());
  w.mu_axis.assign(mu_grid.begin(), mu_grid.end());
  w.nu_axis.assign(nu_grid.begin(), nu_grid.end());
  const std::size_t total = x_grid.size() * mu_grid.size() * nu_grid.size();
  w.points.reserve(total);
  w.values.reserve(total);
  for (double mu : mu_grid)
    for (double nu : nu_grid)
      for (double X : x_grid) {
        const TomographicPoint pt{X, mu, nu};
        w.points.push_back(pt);
        w.values.push_back(sample(pt));
      }
  return w;
}

std::vector<double> QuadraticLattice::x_axis() const {
  const int n = static_cast<int>(std::floor(x_max / x_step));
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[k] = (k + 0.5) * x_step;
  return v;
}

std::vector<double> QuadraticLattice::center_axis() const {
  const int n = static_cast<int>(std::lround(2.0 * center_extent / center_step)) + 1;
  return linspace(-center_extent, center_extent, n);
}

Tomogram quadratic_tomogram(const PhaseSpaceFunction& f, const QuadraticLattice& lattice) {
  const auto xs = lattice.x_axis();
  const auto cs = lattice.center_axis();
  return circle_forward_grid(f, xs, cs, cs);
}

PhaseSpaceFunction quadratic_inverse(const Tomogram& w, const PhaseSpaceGrid& target,
                                     const QuadraticInverseOptions& options) {
  if (w.scheme != Scheme::Quadratic || !w.has_center_lattice())
    throw Error(ErrorKind::BadInput, "quadratic inverse needs an X x mu x nu lattice");
  for (double s : options.damping)
    if (!(s >= 0.0)) throw Error(ErrorKind::BadInput, "damping levels must be nonnegative");
  const double dx = axis_step(w.x_axis, "X");
  const double dmu = axis_step(w.mu_axis, "mu");
  const double dnu = axis_step(w.nu_axis, "nu");
  const std::size_t nx = w.x_axis.size();
  const auto nm = static_cast<Eigen::Index>(w.mu_axis.size());
  const auto nn = static_cast<Eigen::Index>(w.nu_axis.size());
  const double x0 = w.x_axis.front();
  if (x0 < -1e-12) throw Error(ErrorKind::BadInput, "quadratic tomograms start at X >= 0");
  const bool midpoint = std::abs(x0 - 0.5 * dx) < 1e-9 * std::max(1.0, dx);

  // X transform: what(mu, nu) = int w e^{iX} dX.
  std::vector<cplx> phase(nx);
  std::vector<double> weight(nx, dx);
  for (std::size_t k = 0; k < nx; ++k) phase[k] = std::exp(kI * w.x_axis[k]);
  if (!midpoint) {
    weight.front() = 0.5 * dx;
    weight.back() = 0.5 * dx;
  }
  const bool at_origin = !midpoint && std::abs(x0) < 1e-12 && nx >= 3;
  Eigen::MatrixXcd what(nm, nn);
  for (Eigen::Index a = 0; a < nm; ++a)
    for (Eigen::Index b = 0; b < nn; ++b) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < nx; ++k) {
        cplx v = w.at_center(a, b, k);
        // One-sided limit replaces the degenerate circle at X = 0.
        if (k == 0 && at_origin) v = 2.0 * w.at_center(a, b, 1) - w.at_center(a, b, 2);
        acc += weight[k] * v * phase[k];
      }
      what(a, b) = acc;
    }

  Eigen::MatrixXcd A(target.n_q, nm);
  Eigen::MatrixXcd B(target.n_p, nn);
  for (int i = 0; i < target.n_q; ++i)
    for (Eigen::Index a = 0; a < nm; ++a) {
      const double d = target.q(i) - w.mu_axis[a];
      A(i, a) = std::exp(-kI * (d * d));
    }
  for (int j = 0; j < target.n_p; ++j)
    for (Eigen::Index b = 0; b < nn; ++b) {
      const double d = target.p(j) - w.nu_axis[b];
      B(j, b) = std::exp(-kI * (d * d));
    }
  const double pref = options.c / kPi * dmu * dnu;
  auto transform = [&](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
    return pref * (A * m * B.transpose());
  };

  const Eigen::MatrixXcd plain = transform(what);
  const double plain_norm = plain.norm();
  if (plain_norm == 0.0) return PhaseSpaceFunction::zero(target);

  // Integrand left at the lattice edge: what must have decayed there.
  const double peak = what.cwiseAbs().maxCoeff();
  const double edge = std::max({what.row(0).cwiseAbs().maxCoeff(), what.row(nm - 1).cwiseAbs().maxCoeff(),
                                what.col(0).cwiseAbs().maxCoeff(), what.col(nn - 1).cwiseAbs().maxCoeff()});
  if (edge > options.tol * peak)
    throw Error(ErrorKind::NonConvergent, "the (mu, nu) lattice edge still carries " +
                                              std::to_string(edge / peak) +
                                              " of the peak integrand; widen the lattice");

  const bool damped = !options.damping.empty() &&
                      std::any_of(options.damping.begin(), options.damping.end(),
                                  [](double s) { return s > 0.0; });
  if (!damped) return PhaseSpaceFunction(target, plain);

  std::vector<Eigen::MatrixXcd> levels;
  for (double s : options.damping) {
    Eigen::MatrixXcd d = what;
    for (Eigen::Index a = 0; a < nm; ++a)
      for (Eigen::Index b = 0; b < nn; ++b) {
        const double r2 = w.mu_axis[a] * w.mu_axis[a] + w.nu_axis[b] * w.nu_axis[b];
        d(a, b) *= std::exp(-0.5 * s * s * r2);
      }
    levels.push_back(transform(d));
  }
  Eigen::MatrixXcd out(target.n_q, target.n_p);
  double resid2 = 0.0;
  std::vector<cplx> vals(levels.size());
  for (int i = 0; i < target.n_q; ++i)
    for (int j = 0; j < target.n_p; ++j) {
      for (std::size_t l = 0; l < levels.size(); ++l) vals[l] = levels[l](i, j);
      const Extrapolation e = richardson_sigma2(options.damping, vals);
      out(i, j) = e.value;
      resid2 += e.residual * e.residual;
    }
  const double rel = std::sqrt(resid2) / plain_norm;
  if (rel > options.tol)
    throw Error(ErrorKind::NonConvergent,
                "damping extrapolation residual " + std::to_string(rel) + " exceeds tolerance");
  return PhaseSpaceFunction(target, std::move(out));
}

Calibration calibrate_inverse_constant(std::span<const StateSpec> references,
                                       const QuadraticLattice& lattice,
                                       const PhaseSpaceGrid& target) {
  if (references.empty()) throw Error(ErrorKind::BadInput, "calibration needs a reference state");
  const double reach = lattice.center_extent + std::sqrt(lattice.x_max) + 0.5;
  const int n = static_cast<int>(std::ceil(2.0 * reach / 0.1)) + 1;
  const PhaseSpaceGrid forward_grid = make_grid(-reach, reach, -reach, reach, n, n);
  QuadraticInverseOptions unit;
  unit.c = 1.0;
  Calibration cal;
  for (const StateSpec& ref : references) {
    const PhaseSpaceFunction rho = eval_state(ref, forward_grid);
    const PhaseSpaceFunction g = quadratic_inverse(quadratic_tomogram(rho, lattice), target, unit);
    const PhaseSpaceFunction truth = eval_state(ref, target);
    const cplx num = (g.values().conjugate().cwiseProduct(truth.values())).sum();
    const double den = g.values().squaredNorm();
    if (den == 0.0) throw Error(ErrorKind::CalibrationUnstable, "reference reconstruction vanished");
    cal.per_reference.push_back(num.real() / den);
  }
  const auto [lo, hi] = std::minmax_element(cal.per_reference.begin(), cal.per_reference.end());
  cal.c = std::accumulate(cal.per_reference.begin(), cal.per_reference.end(), 0.0) /
          static_cast<double>(cal.per_reference.size());
  if ((*hi - *lo) > 0.05 * std::abs(cal.c))
    throw Error(ErrorKind::CalibrationUnstable,
                "calibration constants differ by more than 5% across references");
  return cal;
}

Calibration calibrate_inverse_constant() {
  const StateSpec refs[] = {StateSpec::coherent({0.0, 0.0}), StateSpec::coherent({1.0, 0.0})};
  return calibrate_inverse_constant(refs);
}

}  // namespace tomo
