#include "tomo/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

Rule1D golub_welsch(const Eigen::VectorXd& off_diag, double mu0) {
  const int n = static_cast<int>(off_diag.size()) + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    jacobi(k, k + 1) = off_diag(k);
    jacobi(k + 1, k) = off_diag(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

Rule1D gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidCount, "Gauss-Legendre needs n >= 1");
  if (n == 1) return Rule1D{{0.0}, {2.0}};
  Eigen::VectorXd beta(n - 1);
  for (int k = 1; k < n; ++k) beta(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(beta, 2.0);
}

Rule1D gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidCount, "Gauss-Hermite needs n >= 1");
  if (n == 1) return Rule1D{{0.0}, {std::sqrt(kPi)}};
  Eigen::VectorXd beta(n - 1);
  for (int k = 1; k < n; ++k) beta(k - 1) = std::sqrt(k / 2.0);
  return golub_welsch(beta, std::sqrt(kPi));
}

Rule1D composite_gauss_legendre(double a, double b, int panels, int order) {
  const Rule1D base = gauss_legendre(order);
  Rule1D rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(rule.nodes.capacity());
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

Rule1D breakpoint_gauss_legendre(double a, double b, std::vector<double> breakpoints,
                                 double max_width, int order) {
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::erase_if(breakpoints, [a, b](double x) { return x < a || x > b; });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                    breakpoints.end());
  const Rule1D base = gauss_legendre(order);
  Rule1D rule;
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    const double lo = breakpoints[s];
    const double hi = breakpoints[s + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width - 1e-9)));
    const double h = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = lo + (k + 0.5) * h;
      for (int i = 0; i < order; ++i) {
        rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
        rule.weights.push_back(0.5 * h * base.weights[i]);
      }
    }
  }
  return rule;
}

namespace {

Rule1D rule_on_interval(Rule rule, double lo, double hi, int n) {
  switch (rule) {
    case Rule::Trapezoid: {
      if (n < 2) throw Error(ErrorKind::InvalidCount, "trapezoid needs n >= 2");
      Rule1D r;
      const double h = (hi - lo) / (n - 1);
      for (int i = 0; i < n; ++i) {
        r.nodes.push_back(lo + i * h);
        r.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
      }
      return r;
    }
    case Rule::GaussLegendre: {
      Rule1D r = gauss_legendre(n);
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = 0.5 * (hi + lo) + 0.5 * (hi - lo) * r.nodes[i];
        r.weights[i] *= 0.5 * (hi - lo);
      }
      return r;
    }
    case Rule::GaussHermite: {
      Rule1D r = gauss_hermite(n);
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.weights[i] *= std::exp(r.nodes[i] * r.nodes[i]);
      }
      return r;
    }
  }
  return {};
}

cplx tensor_sum(const NdFunction& fn, const std::vector<Rule1D>& rules) {
  const std::size_t d = rules.size();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  cplx sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = rules[k].nodes[idx[k]];
      w *= rules[k].weights[idx[k]];
    }
    sum += w * fn(x);
    std::size_t k = 0;
    for (; k < d; ++k) {
      if (++idx[k] < rules[k].nodes.size()) break;
      idx[k] = 0;
    }
    if (k == d) break;
  }
  return sum;
}

cplx tensor_rule(const NdFunction& fn, const Box& domain, Rule rule, int n) {
  std::vector<Rule1D> rules;
  for (std::size_t k = 0; k < domain.dim(); ++k) {
    rules.push_back(rule_on_interval(rule, domain.lo[k], domain.hi[k], n));
  }
  return tensor_sum(fn, rules);
}

}  // namespace

QuadratureResult integrate_nd(const NdFunction& fn, const Box& domain, Rule rule, int n_points,
                              double tol) {
  if (domain.dim() == 0 || domain.lo.size() != domain.hi.size()) {
    throw Error(ErrorKind::BadInput, "integration box must have matching, non-empty bounds");
  }
  QuadratureResult result;
  result.value = tensor_rule(fn, domain, rule, n_points);
  const int half = rule == Rule::Trapezoid ? std::max(2, (n_points + 1) / 2)
                                           : std::max(1, n_points / 2);
  result.half_resolution = tensor_rule(fn, domain, rule, half);
  result.error_estimate = std::abs(result.value - result.half_resolution);
  if (result.error_estimate > tol) {
    throw Error(ErrorKind::ResolutionLimit,
                "quadrature resolutions disagree by " + std::to_string(result.error_estimate));
  }
  return result;
}

Extrapolation richardson_sigma2(std::span<const double> sigmas, std::span<const cplx> values) {
  if (sigmas.empty() || sigmas.size() != values.size()) {
    throw Error(ErrorKind::BadInput, "extrapolation needs matching, non-empty inputs");
  }
  auto neville = [&](std::size_t first) {
    const std::size_t n = sigmas.size() - first;
    std::vector<cplx> p(values.begin() + first, values.end());
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = sigmas[first + i] * sigmas[first + i];
    for (std::size_t m = 1; m < n; ++m) {
      for (std::size_t i = 0; i + m < n; ++i) {
        p[i] = (s[i + m] * p[i] - s[i] * p[i + 1]) / (s[i + m] - s[i]);
      }
    }
    return p[0];
  };
  // Coarsest level first: sort by decreasing sigma so dropping index 0 drops it.
  std::vector<std::size_t> order(sigmas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sigmas[a] > sigmas[b]; });
  std::vector<double> ss;
  std::vector<cplx> vv;
  for (auto i : order) {
    ss.push_back(sigmas[i]);
    vv.push_back(values[i]);
  }
  sigmas = ss;
  values = vv;
  Extrapolation e;
  e.value = neville(0);
  e.residual = sigmas.size() > 1 ? std::abs(e.value - neville(1)) : 0.0;
  return e;
}

OscillatoryResult oscillatory_integrate(const NdFunction& fn, const Box& domain,
                                        std::span<const double> damping_levels, double tol,
                                        int panels, int order) {
  if (damping_levels.empty()) throw Error(ErrorKind::BadInput, "need at least one damping level");
  OscillatoryResult result;
  for (double sigma : damping_levels) {
    std::vector<Rule1D> rules;
    for (std::size_t k = 0; k < domain.dim(); ++k) {
      rules.push_back(composite_gauss_legendre(domain.lo[k], domain.hi[k], panels, order));
    }
    const double s2 = sigma * sigma;
    auto damped = [&](std::span<const double> x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return fn(x) * std::exp(-0.5 * s2 * r2);
    };
    result.levels.push_back(sigma);
    result.level_values.push_back(tensor_sum(damped, rules));
  }
  const Extrapolation e = richardson_sigma2(result.levels, result.level_values);
  result.value = e.value;
  result.residual = e.residual;
  if (result.residual > tol) {
    throw Error(ErrorKind::NonConvergent,
                "damping extrapolation residual " + std::to_string(result.residual));
  }
  return result;
}

double TestFunction::operator()(double x) const {
  return std::exp(-0.5 * x * x / (eps * eps)) / (std::sqrt(2.0 * kPi) * eps);
}

TestFunction delta_smear(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::BadInput, "smearing width must be positive");
  return TestFunction{eps, 0.0};
}

}  // namespace tomo
