#include "tomo/star_product.hpp"

#include <algorithm>
#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/symplectic.hpp"

namespace tomo {

namespace {

struct Axis {
  int n;
  double h;
  double start;
  int band;
  double dxi;
};

Axis make_axis(int n, double h, double start, double band) {
  const double dxi = 2.0 * kPi / (n * h);
  const int j = std::min(static_cast<int>(std::ceil(band / dxi)), (n - 1) / 2);
  return {n, h, start, j, dxi};
}

// Rows: frequencies -band..band, columns: samples. Forward uses e^{-i a x} h.
Eigen::MatrixXcd forward_matrix(const Axis& ax) {
  Eigen::MatrixXcd m(2 * ax.band + 1, ax.n);
  for (int j = -ax.band; j <= ax.band; ++j)
    for (int i = 0; i < ax.n; ++i)
      m(j + ax.band, i) = std::exp(-kI * (j * ax.dxi * (ax.start + i * ax.h))) * ax.h;
  return m;
}

Eigen::MatrixXcd inverse_matrix(const Axis& ax) {
  Eigen::MatrixXcd m(ax.n, 2 * ax.band + 1);
  for (int i = 0; i < ax.n; ++i)
    for (int j = -ax.band; j <= ax.band; ++j)
      m(i, j + ax.band) = std::exp(kI * (j * ax.dxi * (ax.start + i * ax.h))) * ax.dxi / (2.0 * kPi);
  return m;
}

bool same_lattice(const Tomogram& a, const Tomogram& b) {
  auto close = [](const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (std::abs(u[i] - v[i]) > 1e-12 * std::max(1.0, std::abs(u[i]))) return false;
    return true;
  };
  return a.scheme == b.scheme && close(a.x_axis, b.x_axis) && close(a.theta_axis, b.theta_axis) &&
         close(a.mu_axis, b.mu_axis) && close(a.nu_axis, b.nu_axis) &&
         a.values.size() == b.values.size();
}

}  // namespace

PhaseSpaceFunction groenewald_product(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g,
                                      double band) {
  if (!(f.grid() == g.grid()))
    throw Error(ErrorKind::IncompatibleLattices, "symbols are sampled on different grids");
  const PhaseSpaceGrid& grid = f.grid();
  const Axis aq = make_axis(grid.n_q, grid.dq(), grid.q_min, band);
  const Axis ap = make_axis(grid.n_p, grid.dp(), grid.p_min, band);
  const Eigen::MatrixXcd eq = forward_matrix(aq);
  const Eigen::MatrixXcd ep = forward_matrix(ap);
  const Eigen::MatrixXcd fh = eq * f.values() * ep.transpose();
  const Eigen::MatrixXcd gh = eq * g.values() * ep.transpose();

  const int mq = 2 * aq.band + 1;
  const int mp = 2 * ap.band + 1;
  // e^{-(i/2)(a_q z_p - a_p z_q)} factorizes into two tables.
  Eigen::MatrixXcd t1(mq, mp);
  Eigen::MatrixXcd t2(mp, mq);
  for (int a = 0; a < mq; ++a)
    for (int z = 0; z < mp; ++z)
      t1(a, z) = std::exp(-0.5 * kI * ((a - aq.band) * aq.dxi * (z - ap.band) * ap.dxi));
  for (int a = 0; a < mp; ++a)
    for (int z = 0; z < mq; ++z)
      t2(a, z) = std::exp(0.5 * kI * ((a - ap.band) * ap.dxi * (z - aq.band) * aq.dxi));

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(mq, mp);
  const double pref = aq.dxi * ap.dxi / (4.0 * kPi * kPi);
  for (int zq = 0; zq < mq; ++zq) {
    for (int zp = 0; zp < mp; ++zp) {
      cplx acc = 0.0;
      // zeta - a must stay inside the band.
      const int a_lo = std::max(0, zq - aq.band) , a_hi = std::min(mq - 1, zq + aq.band);
      const int b_lo = std::max(0, zp - ap.band), b_hi = std::min(mp - 1, zp + ap.band);
      for (int a = a_lo; a <= a_hi; ++a) {
        const cplx pa = t1(a, zp);
        const int ga = zq - a + aq.band;
        cplx row = 0.0;
        for (int b = b_lo; b <= b_hi; ++b) row += fh(a, b) * gh(ga, zp - b + ap.band) * t2(b, zq);
        acc += pa * row;
      }
      h(zq, zp) = pref * acc;
    }
  }
  const Eigen::MatrixXcd out = inverse_matrix(aq) * h * inverse_matrix(ap).transpose();
  return PhaseSpaceFunction(grid, out);
}

Tomogram star_product(const Tomogram& a, const Tomogram& b, const KernelEvaluator& k) {
  if (!same_lattice(a, b))
    throw Error(ErrorKind::IncompatibleLattices, "star product operands use different lattices");
  if (a.scheme != k.scheme().scheme)
    throw Error(ErrorKind::IncompatibleLattices, "tomograms and kernel belong to different schemes");
  const double to_symbol = 2.0 * kPi;
  switch (a.scheme) {
    case Scheme::Symplectic: {
      if (!a.has_theta_lattice())
        throw Error(ErrorKind::BadInput, "symplectic star product needs an X x theta lattice");
      const double reach = std::max(std::abs(a.x_axis.front()), std::abs(a.x_axis.back()));
      const double d = (a.x_axis.back() - a.x_axis.front()) / static_cast<double>(a.x_axis.size() - 1);
      const double h = std::max(d, reach / 60.0);
      const int half = static_cast<int>(std::floor(reach / h));
      const double edge = half * h;
      const PhaseSpaceGrid grid = make_grid(-edge, edge, -edge, edge, 2 * half + 1, 2 * half + 1);
      const PhaseSpaceFunction fa = radon_inverse(a, grid).scaled(to_symbol);
      const PhaseSpaceFunction fb = radon_inverse(b, grid).scaled(to_symbol);
      const PhaseSpaceFunction w = groenewald_product(fa, fb).scaled(1.0 / to_symbol);
      return radon_forward_grid(w, a.x_axis, a.theta_axis, INFINITY);
    }
    case Scheme::Quadratic: {
      if (!a.has_center_lattice())
        throw Error(ErrorKind::BadInput, "quadratic star product needs an X x mu x nu lattice");
      const PhaseSpaceGrid grid = make_grid(-6.0, 6.0, -6.0, 6.0, 97, 97);
      QuadraticInverseOptions opt;
      opt.c = k.scheme().c;
      const PhaseSpaceFunction fa = quadratic_inverse(a, grid, opt).scaled(to_symbol);
      const PhaseSpaceFunction fb = quadratic_inverse(b, grid, opt).scaled(to_symbol);
      const PhaseSpaceFunction w = groenewald_product(fa, fb).scaled(1.0 / to_symbol);
      return circle_forward_grid(w, a.x_axis, a.mu_axis, a.nu_axis, INFINITY);
    }
    case Scheme::Thick:
      break;
  }
  throw Error(ErrorKind::BadInput, "thick tomograms have no unique phase-space inverse here");
}

cplx star_trace(const Tomogram& w) {
  std::vector<cplx> s;
  if (w.has_theta_lattice()) s = slice_integrals(w);
  else if (w.has_center_lattice()) s = center_integrals(w);
  else throw Error(ErrorKind::BadInput, "star trace needs a structured lattice");
  cplx acc = 0.0;
  for (const cplx& v : s) acc += v;
  return acc / static_cast<double>(s.size());
}

}  // namespace tomo
