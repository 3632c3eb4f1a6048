#include "tomo/phase_space.hpp"

#include <algorithm>
#include <cmath>

#include "tomo/errors.hpp"

namespace tomo {

PhaseSpaceGrid make_grid(double q_min, double q_max, double p_min, double p_max, int n_q,
                         int n_p) {
  if (!(q_min < q_max) || !(p_min < p_max)) {
    throw Error(ErrorKind::InvalidBounds, "grid bounds must satisfy min < max");
  }
  if (n_q < 2 || n_p < 2) {
    throw Error(ErrorKind::InvalidCount, "grid needs at least 2 samples per axis");
  }
  return PhaseSpaceGrid{q_min, q_max, p_min, p_max, n_q, n_p};
}

StateSpec StateSpec::coherent(cplx alpha) {
  StateSpec s;
  s.kind = StateKind::Coherent;
  s.alpha = alpha;
  return s;
}

StateSpec StateSpec::fock(int n) {
  StateSpec s;
  s.kind = StateKind::Fock;
  s.n = n;
  return s;
}

StateSpec StateSpec::thermal(double nbar) {
  StateSpec s;
  s.kind = StateKind::Thermal;
  s.nbar = nbar;
  return s;
}

StateSpec StateSpec::gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
  StateSpec s;
  s.kind = StateKind::GaussianClassical;
  s.mean = mean;
  s.cov = cov;
  return s;
}

void StateSpec::validate() const {
  switch (kind) {
    case StateKind::GaussianClassical: {
      if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * (1.0 + cov.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::InvalidState, "covariance must be symmetric");
      }
      if (!(cov(0, 0) > 0.0) || !(cov.determinant() > 0.0)) {
        throw Error(ErrorKind::InvalidState, "covariance must be positive definite");
      }
      break;
    }
    case StateKind::Fock:
      if (n < 0) throw Error(ErrorKind::InvalidState, "photon number must be >= 0");
      break;
    case StateKind::Thermal:
      if (!(nbar >= 0.0)) throw Error(ErrorKind::InvalidState, "mean occupation must be >= 0");
      break;
    case StateKind::Coherent:
      break;
  }
}

PhaseSpaceFunction::PhaseSpaceFunction(PhaseSpaceGrid grid, Eigen::MatrixXcd values,
                                       AnalyticTag tag, PointFunction exact)
    : grid_(grid), values_(std::move(values)), tag_(tag), exact_(std::move(exact)) {
  if (values_.rows() != grid_.n_q || values_.cols() != grid_.n_p) {
    throw Error(ErrorKind::BadInput, "values shape does not match the grid");
  }
  if (values_.size() > 0) {
    const Eigen::MatrixXd a = values_.cwiseAbs();
    max_abs_ = a.maxCoeff();
    const int nq = grid_.n_q;
    const int np = grid_.n_p;
    boundary_max_abs_ = std::max({a.row(0).maxCoeff(), a.row(nq - 1).maxCoeff(),
                                  a.col(0).maxCoeff(), a.col(np - 1).maxCoeff()});
  }
}

PhaseSpaceFunction PhaseSpaceFunction::sample(const PointFunction& fn, const PhaseSpaceGrid& grid,
                                              AnalyticTag tag) {
  Eigen::MatrixXcd values(grid.n_q, grid.n_p);
  for (int i = 0; i < grid.n_q; ++i) {
    for (int j = 0; j < grid.n_p; ++j) values(i, j) = fn(grid.q(i), grid.p(j));
  }
  return PhaseSpaceFunction(grid, std::move(values), tag, fn);
}

PhaseSpaceFunction PhaseSpaceFunction::zero(const PhaseSpaceGrid& grid) {
  return PhaseSpaceFunction(grid, Eigen::MatrixXcd::Zero(grid.n_q, grid.n_p));
}

cplx PhaseSpaceFunction::at(double q, double p) const {
  if (exact_) return exact_(q, p);
  return interpolate(q, p);
}

cplx PhaseSpaceFunction::interpolate(double q, double p) const {
  if (!grid_.contains(q, p)) return 0.0;
  const double u = (q - grid_.q_min) / grid_.dq();
  const double v = (p - grid_.p_min) / grid_.dp();
  const int i = std::min(static_cast<int>(u), grid_.n_q - 2);
  const int j = std::min(static_cast<int>(v), grid_.n_p - 2);
  const double fu = u - i;
  const double fv = v - j;
  return (1.0 - fu) * (1.0 - fv) * values_(i, j) + fu * (1.0 - fv) * values_(i + 1, j) +
         (1.0 - fu) * fv * values_(i, j + 1) + fu * fv * values_(i + 1, j + 1);
}


PhaseSpaceFunction PhaseSpaceFunction::scaled(cplx factor) const {
  PointFunction fn;
  if (exact_) {
    fn = [inner = exact_, factor](double q, double p) { return factor * inner(q, p); };
  }
  return PhaseSpaceFunction(grid_, factor * values_, fn ? AnalyticTag::Custom : AnalyticTag::None,
                            fn);
}

PhaseSpaceFunction PhaseSpaceFunction::plus(const PhaseSpaceFunction& other) const {
  if (!(grid_ == other.grid_)) {
    throw Error(ErrorKind::IncompatibleLattices, "cannot add functions on different grids");
  }
  PointFunction fn;
  if (exact_ && other.exact_) {
    fn = [a = exact_, b = other.exact_](double q, double p) { return a(q, p) + b(q, p); };
  }
  return PhaseSpaceFunction(grid_, values_ + other.values_,
                            fn ? AnalyticTag::Custom : AnalyticTag::None, fn);
}

PointFunction wigner_function(const StateSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case StateKind::Coherent: {
      const double q0 = std::sqrt(2.0) * spec.alpha.real();
      const double p0 = std::sqrt(2.0) * spec.alpha.imag();
      return [q0, p0](double q, double p) -> cplx {
        const double dq = q - q0;
        const double dp = p - p0;
        return std::exp(-dq * dq - dp * dp) / kPi;
      };
    }
    case StateKind::Fock: {
      const int n = spec.n;
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      return [n, sign](double q, double p) -> cplx {
        const double r2 = q * q + p * p;
        return sign / kPi * std::exp(-r2) * laguerre(n, 0.0, 2.0 * r2);
      };
    }
    case StateKind::Thermal: {
      const double s = 2.0 * spec.nbar + 1.0;
      return [s](double q, double p) -> cplx {
        return std::exp(-(q * q + p * p) / s) / (kPi * s);
      };
    }
    case StateKind::GaussianClassical: {
      const Eigen::Matrix2d inv = spec.cov.inverse();
      const double norm = 1.0 / (2.0 * kPi * std::sqrt(spec.cov.determinant()));
      const Eigen::Vector2d mean = spec.mean;
      return [inv, norm, mean](double q, double p) -> cplx {
        const Eigen::Vector2d d(q - mean(0), p - mean(1));
        return norm * std::exp(-0.5 * d.dot(inv * d));
      };
    }
  }
  return {};
}

PhaseSpaceFunction eval_state(const StateSpec& spec, const PhaseSpaceGrid& grid) {
  AnalyticTag tag = AnalyticTag::Custom;
  switch (spec.kind) {
    case StateKind::Coherent: tag = AnalyticTag::CoherentWigner; break;
    case StateKind::Fock: tag = AnalyticTag::FockWigner; break;
    case StateKind::Thermal: tag = AnalyticTag::ThermalWigner; break;
    case StateKind::GaussianClassical: tag = AnalyticTag::Gaussian; break;
  }
  return PhaseSpaceFunction::sample(wigner_function(spec), grid, tag);
}

namespace {

double trapezoid_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

cplx integrate(const PhaseSpaceFunction& f) {
  const auto& g = f.grid();
  cplx sum = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    for (int j = 0; j < g.n_p; ++j) {
      sum += trapezoid_weight(i, g.n_q) * trapezoid_weight(j, g.n_p) * f.values()(i, j);
    }
  }
  return sum * g.dq() * g.dp();
}

Moments moments(const PhaseSpaceFunction& f) {
  const auto& g = f.grid();
  double m0 = 0.0, mq = 0.0, mp = 0.0, mqq = 0.0, mpp = 0.0, mqp = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    const double q = g.q(i);
    for (int j = 0; j < g.n_p; ++j) {
      const double p = g.p(j);
      const double w = trapezoid_weight(i, g.n_q) * trapezoid_weight(j, g.n_p) *
                       f.values()(i, j).real();
      m0 += w;
      mq += w * q;
      mp += w * p;
      mqq += w * q * q;
      mpp += w * p * p;
      mqp += w * q * p;
    }
  }
  const double area = g.dq() * g.dp();
  Moments m;
  m.norm = m0 * area;
  m.mean_q = mq / m0;
  m.mean_p = mp / m0;
  m.cov(0, 0) = mqq / m0 - m.mean_q * m.mean_q;
  m.cov(1, 1) = mpp / m0 - m.mean_p * m.mean_p;
  m.cov(0, 1) = m.cov(1, 0) = mqp / m0 - m.mean_q * m.mean_p;
  m.truncated_support = f.boundary_max_abs() > 1e-6 * f.max_abs();
  return m;
}

double relative_l2(const PhaseSpaceFunction& a, const PhaseSpaceFunction& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorKind::IncompatibleLattices, "relative_l2 needs a shared grid");
  }
  const double denom = b.values().norm();
  return (a.values() - b.values()).norm() / (denom > 0.0 ? denom : 1.0);
}

}  // namespace tomo
