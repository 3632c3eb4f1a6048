#include "tomo/thick.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/symplectic.hpp"

namespace tomo {

namespace {

constexpr double kGaussianReach = 9.0;
constexpr double kSingularThreshold = 1e-12;

double lerp_samples(const std::vector<double>& y, const std::vector<double>& v, double x) {
  if (x < y.front() || x > y.back()) return 0.0;
  const auto it = std::upper_bound(y.begin(), y.end(), x);
  if (it == y.end()) return v.back();
  const auto k = static_cast<std::size_t>(it - y.begin()) - 1;
  const double t = (x - y[k]) / (y[k + 1] - y[k]);
  return (1.0 - t) * v[k] + t * v[k + 1];
}

// Degree-5 local Lagrange interpolant of uniformly spaced samples; zero outside.
class SliceInterpolant {
 public:
  SliceInterpolant(double x0, double h, std::vector<cplx> v) : x0_(x0), h_(h), v_(std::move(v)) {}

  cplx operator()(double x) const {
    const double u = (x - x0_) / h_;
    const auto n = static_cast<long>(v_.size());
    if (u < -1e-9 || u > static_cast<double>(n - 1) + 1e-9) return 0.0;
    long start = static_cast<long>(std::floor(u)) - 2;
    start = std::clamp(start, 0L, std::max(0L, n - 6));
    const long stop = std::min(n, start + 6);
    cplx acc = 0.0;
    for (long i = start; i < stop; ++i) {
      double l = 1.0;
      for (long j = start; j < stop; ++j)
        if (j != i) l *= (u - static_cast<double>(j)) / static_cast<double>(i - j);
      acc += l * v_[static_cast<std::size_t>(i)];
    }
    return acc;
  }

 private:
  double x0_;
  double h_;
  std::vector<cplx> v_;
};

double uniform_spacing(const std::vector<double>& x) {
  if (x.size() < 6) throw Error(ErrorKind::InvalidCount, "a slice needs at least 6 X samples");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(h > 0.0)) throw Error(ErrorKind::BadInput, "X samples must increase");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * std::max(1.0, h))
      throw Error(ErrorKind::BadInput, "X samples must be uniformly spaced");
  return h;
}

// Custom windows are carried onto the lattice spacing h (sample at multiples of
// h, linear in between) and must survive the trip.
WindowFunction resample_custom(const WindowFunction& xi, double h) {
  const auto& ys = xi.y_samples();
  const auto& vs = xi.xi_samples();
  const long lo = static_cast<long>(std::floor(ys.front() / h));
  const long hi = static_cast<long>(std::ceil(ys.back() / h));
  std::vector<double> y;
  std::vector<double> v;
  for (long k = lo; k <= hi; ++k) {
    y.push_back(static_cast<double>(k) * h);
    v.push_back(xi(static_cast<double>(k) * h));
  }
  const double vmax = *std::max_element(vs.begin(), vs.end());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double miss = std::abs(lerp_samples(y, v, ys[k]) - xi.amplitude() * vs[k]);
    if (miss > 1e-2 * xi.amplitude() * vmax)
      throw Error(ErrorKind::UnresolvedWindow,
                  "custom window varies faster than the X spacing " + std::to_string(h));
  }
  return WindowFunction::custom(std::move(y), std::move(v));
}

}  // namespace

WindowFunction WindowFunction::rectangular(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::BadInput, "rectangular window needs a positive width");
  WindowFunction w;
  w.kind_ = WindowKind::Rectangular;
  w.delta_ = delta;
  w.cache();
  return w;
}

WindowFunction WindowFunction::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::BadInput, "gaussian window needs a positive sigma");
  WindowFunction w;
  w.kind_ = WindowKind::Gaussian;
  w.sigma_ = sigma;
  w.cache();
  return w;
}

WindowFunction WindowFunction::custom(std::vector<double> y, std::vector<double> xi) {
  if (y.size() != xi.size() || y.size() < 2)
    throw Error(ErrorKind::BadInput, "custom window needs matching Y and Xi arrays of length >= 2");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(xi[i]))
      throw Error(ErrorKind::BadInput, "custom window samples must be finite");
    if (xi[i] < 0.0) throw Error(ErrorKind::BadInput, "window values must be nonnegative");
    if (i > 0 && !(y[i] > y[i - 1]))
      throw Error(ErrorKind::BadInput, "custom window Y must be strictly increasing");
  }
  WindowFunction w;
  w.kind_ = WindowKind::Custom;
  w.y_ = std::move(y);
  w.xi_ = std::move(xi);
  w.cache();
  return w;
}

void WindowFunction::cache() { fourier_one_ = fourier(1.0); }

double WindowFunction::operator()(double y) const {
  switch (kind_) {
    case WindowKind::Rectangular:
      return std::abs(y) <= 0.5 * delta_ ? amplitude_ : 0.0;
    case WindowKind::Gaussian:
      return amplitude_ * std::exp(-0.5 * y * y / (sigma_ * sigma_)) /
             (std::sqrt(2.0 * kPi) * sigma_);
    case WindowKind::Custom:
      return amplitude_ * lerp_samples(y_, xi_, y);
  }
  return 0.0;
}

cplx WindowFunction::fourier(double k) const {
  switch (kind_) {
    case WindowKind::Rectangular: {
      const double half = 0.5 * k * delta_;
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      return amplitude_ * delta_ * sinc;
    }
    case WindowKind::Gaussian:
      return amplitude_ * std::exp(-0.5 * sigma_ * sigma_ * k * k);
    case WindowKind::Custom: {
      cplx acc = 0.0;
      const Rule1D base = gauss_legendre(10);
      const double max_w = 1.0 / std::max(1.0, std::abs(k));
      for (std::size_t s = 0; s + 1 < y_.size(); ++s) {
        const double a = y_[s];
        const double b = y_[s + 1];
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_w)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
          const double mid = a + (p + 0.5) * h;
          for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            const double z = mid + 0.5 * h * base.nodes[i];
            const double t = (z - a) / (b - a);
            acc += 0.5 * h * base.weights[i] * ((1.0 - t) * xi_[s] + t * xi_[s + 1]) *
                   std::exp(kI * (k * z));
          }
        }
      }
      return amplitude_ * acc;
    }
  }
  return 0.0;
}

std::pair<double, double> WindowFunction::support() const {
  switch (kind_) {
    case WindowKind::Rectangular: return {-0.5 * delta_, 0.5 * delta_};
    case WindowKind::Gaussian: return {-kGaussianReach * sigma_, kGaussianReach * sigma_};
    case WindowKind::Custom: return {y_.front(), y_.back()};
  }
  return {0.0, 0.0};
}

std::vector<double> WindowFunction::breakpoints() const {
  switch (kind_) {
    case WindowKind::Rectangular: return {-0.5 * delta_, 0.5 * delta_};
    case WindowKind::Gaussian: return {0.0};
    case WindowKind::Custom: return y_;
  }
  return {};
}

double WindowFunction::scale() const {
  switch (kind_) {
    case WindowKind::Rectangular: return delta_;
    case WindowKind::Gaussian: return sigma_;
    case WindowKind::Custom: {
      double m = y_.back() - y_.front();
      for (std::size_t i = 1; i < y_.size(); ++i) m = std::min(m, y_[i] - y_[i - 1]);
      return m;
    }
  }
  return 1.0;
}

cplx WindowFunction::normalization() const {
  if (std::abs(fourier_one_) < kSingularThreshold)
    throw Error(ErrorKind::SingularWindow, "int Xi(z) e^{iz} dz vanishes; N_Xi does not exist");
  return 1.0 / fourier_one_;
}

WindowFunction WindowFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorKind::BadInput, "window scale factor must be positive");
  WindowFunction w = *this;
  w.amplitude_ *= factor;
  w.fourier_one_ *= factor;
  return w;
}

cplx window_normalization(const WindowFunction& xi) { return xi.normalization(); }

cplx thick_forward(const PhaseSpaceFunction& f, const WindowFunction& xi,
                   const TomographicPoint& x) {
  const auto [lo, hi] = xi.support();
  const double width = std::min(0.25, 0.5 * xi.scale());
  const Rule1D rule = breakpoint_gauss_legendre(lo, hi, xi.breakpoints(), width, 10);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    const double wgt = xi(y);
    if (wgt == 0.0) continue;
    acc += rule.weights[i] * wgt * radon_forward(f, {x.X - y, x.mu, x.nu});
  }
  return acc;
}

Tomogram thick_forward_grid(const PhaseSpaceFunction& f, const WindowFunction& xi,
                            std::span<const double> x_grid, std::span<const double> theta_grid) {
  const std::vector<double> xs(x_grid.begin(), x_grid.end());
  bool uniform = xs.size() >= 6;
  double h = 0.0;
  if (uniform) {
    try {
      h = uniform_spacing(xs);
    } catch (const Error&) {
      uniform = false;
    }
  }
  const bool fine_enough = uniform && h <= 0.1 + 1e-12 && xi.kind() != WindowKind::Custom;
  if (!fine_enough) {
    Tomogram w;
    w.scheme = Scheme::Thick;
    w.x_axis = xs;
    w.theta_axis.assign(theta_grid.begin(), theta_grid.end());
    for (double th : theta_grid)
      for (double X : xs) {
        const TomographicPoint pt{X, std::cos(th), std::sin(th)};
        w.points.push_back(pt);
        w.values.push_back(thick_forward(f, xi, pt));
      }
    return w;
  }
  // Ideal slices on the lattice widened by the window reach, then convolved.
  const auto [lo, hi] = xi.support();
  const long pad_lo = static_cast<long>(std::ceil(hi / h)) + 3;
  const long pad_hi = static_cast<long>(std::ceil(-lo / h)) + 3;
  std::vector<double> wide;
  for (long k = -pad_lo; k < static_cast<long>(xs.size()) + pad_hi; ++k)
    wide.push_back(xs.front() + static_cast<double>(k) * h);
  const Tomogram ideal = radon_forward_grid(f, wide, theta_grid);
  const Tomogram thick = thick_from_ideal(ideal, xi);
  Tomogram w;
  w.scheme = Scheme::Thick;
  w.x_axis = xs;
  w.theta_axis.assign(theta_grid.begin(), theta_grid.end());
  for (std::size_t t = 0; t < theta_grid.size(); ++t)
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t src = t * wide.size() + i + static_cast<std::size_t>(pad_lo);
      w.points.push_back({xs[i], std::cos(theta_grid[t]), std::sin(theta_grid[t])});
      w.values.push_back(thick.values[src]);
    }
  return w;
}

Tomogram thick_from_ideal(const Tomogram& ideal, const WindowFunction& xi) {
  if (ideal.scheme == Scheme::Quadratic)
    throw Error(ErrorKind::BadInput, "thick smearing applies to symplectic slices");
  const std::size_t nx = ideal.x_axis.size();
  std::size_t n_slices = 0;
  if (ideal.has_theta_lattice())
    n_slices = ideal.theta_axis.size();
  else if (nx > 0 && ideal.values.size() == nx)
    n_slices = 1;
  else
    throw Error(ErrorKind::BadInput, "thick_from_ideal needs slices sampled on a common X axis");
  const double h = uniform_spacing(ideal.x_axis);
  const double x0 = ideal.x_axis.front();

  const WindowFunction win = xi.kind() == WindowKind::Custom ? resample_custom(xi, h) : xi;
  const auto [lo, hi] = win.support();
  const double width = std::min(h, 0.5 * win.scale());
  std::vector<double> window_breaks = win.breakpoints();

  Tomogram out = ideal;
  out.scheme = Scheme::Thick;
  for (std::size_t s = 0; s < n_slices; ++s) {
    std::vector<cplx> v(ideal.values.begin() + static_cast<long>(s * nx),
                        ideal.values.begin() + static_cast<long>((s + 1) * nx));
    const SliceInterpolant interp(x0, h, std::move(v));
    for (std::size_t i = 0; i < nx; ++i) {
      const double X = ideal.x_axis[i];
      // Y such that X - Y stays inside the slice.
      const double a = std::max(lo, X - ideal.x_axis.back());
      const double b = std::min(hi, X - x0);
      if (!(b > a)) {
        out.values[s * nx + i] = 0.0;
        continue;
      }
      std::vector<double> breaks = window_breaks;
      const long k_lo = static_cast<long>(std::floor(a / h)) - 1;
      const long k_hi = static_cast<long>(std::ceil(b / h)) + 1;
      // X - Y on lattice nodes keeps each panel inside one interpolation cell.
      const double phase = X - x0 - h * std::round((X - x0) / h);
      for (long k = k_lo; k <= k_hi; ++k) breaks.push_back(static_cast<double>(k) * h + phase);
      const Rule1D rule = breakpoint_gauss_legendre(a, b, std::move(breaks), width, 8);
      cplx acc = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double y = rule.nodes[q];
        const double wgt = win(y);
        if (wgt != 0.0) acc += rule.weights[q] * wgt * interp(X - y);
      }
      out.values[s * nx + i] = acc;
    }
  }
  return out;
}

}  // namespace tomo
