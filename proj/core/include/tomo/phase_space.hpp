#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "tomo/math.hpp"

namespace tomo {

/// Uniform rectangular sampling of single-mode phase space (hbar = 1).
struct PhaseSpaceGrid {
  double q_min = 0.0;
  double q_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  int n_q = 0;
  int n_p = 0;

  double dq() const { return (q_max - q_min) / (n_q - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }
  double q(int i) const { return q_min + i * dq(); }
  double p(int j) const { return p_min + j * dp(); }
  bool contains(double qv, double pv) const {
    return qv >= q_min && qv <= q_max && pv >= p_min && pv <= p_max;
  }
  bool operator==(const PhaseSpaceGrid&) const = default;
};

/// Throws InvalidBounds / InvalidCount.
PhaseSpaceGrid make_grid(double q_min, double q_max, double p_min, double p_max, int n_q, int n_p);

enum class StateKind { GaussianClassical, Coherent, Fock, Thermal };

struct StateSpec {
  StateKind kind = StateKind::Coherent;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
  cplx alpha{0.0, 0.0};
  int n = 0;
  double nbar = 0.0;

  static StateSpec coherent(cplx alpha);
  static StateSpec fock(int n);
  static StateSpec thermal(double nbar);
  static StateSpec gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);

  /// Throws InvalidState when the parameters break the kind's invariants.
  void validate() const;
};

enum class AnalyticTag { None, Gaussian, CoherentWigner, FockWigner, ThermalWigner, Custom };

using PointFunction = std::function<cplx(double q, double p)>;

/// Complex samples f(q_i, p_j) on a grid, optionally backed by the exact
/// function they were sampled from. Immutable after construction.
class PhaseSpaceFunction {
 public:
  PhaseSpaceFunction(PhaseSpaceGrid grid, Eigen::MatrixXcd values,
                     AnalyticTag tag = AnalyticTag::None, PointFunction exact = {});

  static PhaseSpaceFunction sample(const PointFunction& fn, const PhaseSpaceGrid& grid,
                                   AnalyticTag tag = AnalyticTag::Custom);
  static PhaseSpaceFunction zero(const PhaseSpaceGrid& grid);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  AnalyticTag tag() const { return tag_; }
  bool has_exact() const { return static_cast<bool>(exact_); }
  const PointFunction& exact() const { return exact_; }

  /// Exact value when backed, bilinear interpolation otherwise (zero outside the grid).
  cplx at(double q, double p) const;
  cplx interpolate(double q, double p) const;

  double max_abs() const { return max_abs_; }
  /// Largest |value| on the outer ring of samples.
  double boundary_max_abs() const { return boundary_max_abs_; }

  PhaseSpaceFunction scaled(cplx factor) const;
  PhaseSpaceFunction plus(const PhaseSpaceFunction& other) const;

 private:
  PhaseSpaceGrid grid_;
  Eigen::MatrixXcd values_;
  AnalyticTag tag_ = AnalyticTag::None;
  PointFunction exact_;
  double max_abs_ = 0.0;
  double boundary_max_abs_ = 0.0;
};

/// Exact Wigner function (or classical density) of a state, alpha = (q + i p)/sqrt(2).
PointFunction wigner_function(const StateSpec& spec);

PhaseSpaceFunction eval_state(const StateSpec& spec, const PhaseSpaceGrid& grid);

struct Moments {
  double norm = 0.0;
  double mean_q = 0.0;
  double mean_p = 0.0;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  bool truncated_support = false;
};

/// Trapezoid-rule moments of the real part.
Moments moments(const PhaseSpaceFunction& f);

/// Trapezoid-rule integral over the grid.
cplx integrate(const PhaseSpaceFunction& f);

/// ||a - b|| / ||b|| in the discrete L2 norm of the shared grid.
double relative_l2(const PhaseSpaceFunction& a, const PhaseSpaceFunction& b);

}  // namespace tomo
