#include "tomo/tomogram.hpp"

#include <string>

#include "tomo/errors.hpp"

namespace tomo {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Symplectic: return "symplectic";
    case Scheme::Thick: return "thick";
    case Scheme::Quadratic: return "quadratic";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "symplectic") return Scheme::Symplectic;
  if (name == "thick") return Scheme::Thick;
  if (name == "quadratic") return Scheme::Quadratic;
  throw Error(ErrorKind::BadInput, "unknown scheme '" + std::string(name) + "'");
}

void Tomogram::validate() const {
  if (points.size() != values.size())
    throw Error(ErrorKind::BadInput, "tomogram has " + std::to_string(points.size()) +
                                         " points but " + std::to_string(values.size()) + " values");
  if (!x_axis.empty() && !has_theta_lattice() && !has_center_lattice())
    throw Error(ErrorKind::BadInput, "tomogram lattice axes do not match the number of values");
}

std::vector<cplx> slice_integrals(const Tomogram& w) {
  if (!w.has_theta_lattice() || w.x_axis.size() < 2)
    throw Error(ErrorKind::BadInput, "slice integrals need an X x theta lattice");
  const std::size_t nx = w.x_axis.size();
  std::vector<cplx> out(w.theta_axis.size());
  for (std::size_t t = 0; t < w.theta_axis.size(); ++t) {
    cplx s = 0.0;
    for (std::size_t i = 0; i + 1 < nx; ++i)
      s += 0.5 * (w.at_theta(t, i) + w.at_theta(t, i + 1)) * (w.x_axis[i + 1] - w.x_axis[i]);
    out[t] = s;
  }
  return out;
}

std::vector<cplx> center_integrals(const Tomogram& w) {
  if (!w.has_center_lattice() || w.x_axis.size() < 2)
    throw Error(ErrorKind::BadInput, "centre integrals need an X x mu x nu lattice");
  const std::size_t nx = w.x_axis.size();
  const double dx = (w.x_axis.back() - w.x_axis.front()) / static_cast<double>(nx - 1);
  const bool midpoint = std::abs(w.x_axis.front() - 0.5 * dx) < 1e-9;
  std::vector<cplx> out;
  out.reserve(w.mu_axis.size() * w.nu_axis.size());
  for (std::size_t a = 0; a < w.mu_axis.size(); ++a)
    for (std::size_t b = 0; b < w.nu_axis.size(); ++b) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < nx; ++i)
        s += ((!midpoint && (i == 0 || i + 1 == nx)) ? 0.5 * dx : dx) * w.at_center(a, b, i);
      out.push_back(s);
    }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidCount, "linspace needs at least one point");
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + i * h;
  v.back() = hi;
  return v;
}

std::vector<double> half_circle_angles(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidCount, "need at least one angle");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = kPi * i / n;
  return v;
}

}  // namespace tomo
