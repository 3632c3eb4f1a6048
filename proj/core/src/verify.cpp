#include "tomo/verify.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include <json.hpp>

#include "tomo/errors.hpp"
#include "tomo/kernels.hpp"
#include "tomo/operators.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/star_product.hpp"
#include "tomo/symplectic.hpp"
#include "tomo/thick.hpp"

namespace tomo {

namespace {

struct Suite {
  std::string name;
  std::vector<CheckResult>& out;

  // Runs `body`, which returns the measured error; any library error fails the check.
  void check(const std::string& check_name, double tolerance, const std::function<double()>& body,
             const std::string& detail = {}) {
    CheckResult r{name, check_name, false, 0.0, tolerance, detail};
    try {
      r.error = body();
      r.passed = std::isfinite(r.error) && r.error <= tolerance;
    } catch (const std::exception& e) {
      r.error = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

const PhaseSpaceGrid& wide_grid() {
  static const PhaseSpaceGrid g = make_grid(-8, 8, -8, 8, 161, 161);
  return g;
}

void classical_suite(Suite& s, std::mt19937_64& rng) {
  const auto xs = linspace(-6, 6, 121);
  const auto th = half_circle_angles(64);
  const auto target = make_grid(-5, 5, -5, 5, 101, 101);
  const StateSpec coherent = StateSpec::coherent({0.5, -0.3});
  const auto f = eval_state(coherent, wide_grid());

  s.check("symplectic_round_trip", 1e-3, [&] {
    const auto w = radon_forward_grid(f, xs, th);
    return relative_l2(radon_inverse(w, target), eval_state(coherent, target));
  }, "coherent alpha=(0.5,-0.3), 121 X x 64 angles -> 101^2");

  s.check("slice_normalization", 1e-8, [&] {
    const auto w = radon_forward_grid(f, xs, th);
    double worst = 0.0;
    for (cplx v : slice_integrals(w)) worst = std::max(worst, std::abs(v - 1.0));
    return worst;
  });

  s.check("homogeneity", 1e-6, [&] {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const TomographicPoint x{u(rng), u(rng), u(rng)};
      if (std::hypot(x.mu, x.nu) < 0.2) continue;
      const cplx base = radon_forward(f, x);
      for (double lambda : {-2.0, 0.5, 3.0}) {
        const cplx scaled = std::abs(lambda) * radon_forward(f, {lambda * x.X, lambda * x.mu,
                                                                 lambda * x.nu});
        worst = std::max(worst, std::abs(scaled - base) / std::max(std::abs(base), 1e-3));
      }
    }
    return worst;
  });

  s.check("linearity", 1e-12, [&] {
    const auto g = eval_state(StateSpec::fock(1), wide_grid());
    const cplx a{0.7, -0.2}, b{-1.3, 0.4};
    const auto h = f.scaled(a).plus(g.scaled(b));
    double worst = 0.0;
    for (const TomographicPoint& x : {TomographicPoint{0.3, 1, 0}, TomographicPoint{-0.8, 0.6, 0.8}}) {
      const cplx lhs = radon_forward(h, x);
      const cplx rhs = a * radon_forward(f, x) + b * radon_forward(g, x);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
  });

  const auto rect = WindowFunction::rectangular(2.0);
  const auto gauss = WindowFunction::gaussian(1.0);
  s.check("window_normalization", 1e-8, [&] {
    const double e1 = std::abs(window_normalization(rect) - 1.0 / (2.0 * std::sin(1.0)));
    const double e2 = std::abs(window_normalization(gauss) - std::exp(0.5));
    return std::max(e1, e2);
  });

  s.check("thick_identity", 1e-6, [&] {
    const auto w0 = eval_state(StateSpec::coherent({0, 0}), wide_grid());
    const auto x = linspace(-6, 6, 241);
    const double theta = 0.4;
    const std::vector<double> one{theta};
    const auto ideal = radon_forward_grid(w0, x, one);
    double worst = 0.0;
    for (const auto* xi : {&rect, &gauss}) {
      const auto thick = thick_from_ideal(ideal, *xi);
      for (std::size_t i = 0; i < x.size(); i += 4) {
        if (std::abs(x[i]) > 3.0) continue;
        const cplx direct = thick_forward(w0, *xi, {x[i], std::cos(theta), std::sin(theta)});
        worst = std::max(worst, std::abs(thick.values[i] - direct));
      }
    }
    return worst;
  }, "vacuum, X spacing 0.05, |X| <= 3");

  s.check("circle_vacuum_profile", 1e-6, [&] {
    const auto w0 = eval_state(StateSpec::coherent({0, 0}), wide_grid());
    double worst = 0.0;
    for (double X : {0.25, 1.0, 2.5, 4.0})
      worst = std::max(worst, std::abs(circle_forward(w0, {X, 0, 0}) - std::exp(-X)));
    return worst;
  }, "w(X, 0, 0) = e^{-X} for the vacuum");

  s.check("circle_support", 0.0, [&] {
    double worst = 0.0;
    for (double X : {-2.0, -0.1, 0.0}) worst = std::max(worst, std::abs(circle_forward(f, {X, 0.3, 0.2})));
    return worst;
  });

  s.check("quadratic_round_trip", 5e-2, [&] {
    const Calibration cal = calibrate_inverse_constant();
    const auto tgt = make_grid(-4, 4, -4, 4, 41, 41);
    const StateSpec vac = StateSpec::coherent({0, 0});
    const QuadraticLattice lattice;
    const double reach = lattice.center_extent + std::sqrt(lattice.x_max) + 0.5;
    const int n = static_cast<int>(std::lround(2 * reach / 0.1)) + 1;
    const auto src = eval_state(vac, make_grid(-reach, reach, -reach, reach, n, n));
    QuadraticInverseOptions opt;
    opt.c = cal.c;
    return relative_l2(quadratic_inverse(quadratic_tomogram(src, lattice), tgt, opt),
                       eval_state(vac, tgt));
  }, "vacuum with calibrated c");
}

// Quantum symbol vs classical transform of the Wigner function, relative to
// the larger of |classical| and 1e-3 of its peak over the sampled points.
double commuting_square(const Operator& rho, const PhaseSpaceFunction& wigner,
                        const SchemeSpec& scheme, const std::vector<TomographicPoint>& pts) {
  std::vector<cplx> classical;
  for (const auto& x : pts)
    classical.push_back(scheme.scheme == Scheme::Quadratic ? circle_forward(wigner, x)
                                                           : radon_forward(wigner, x));
  double peak = 0.0;
  for (cplx v : classical) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx q = tomographic_symbol(rho, scheme, pts[i]);
    worst = std::max(worst, std::abs(q - classical[i]) / std::max(std::abs(classical[i]), 1e-3 * peak));
  }
  return worst;
}

void quantum_suite(Suite& s, std::mt19937_64& rng, int dim) {
  const std::vector<std::pair<std::string, StateSpec>> states{
      {"vacuum", StateSpec::coherent({0, 0})},
      {"fock1", StateSpec::fock(1)},
      {"coherent(1,0)", StateSpec::coherent({1, 0})}};

  std::uniform_real_distribution<double> ux(-2.0, 2.0), uth(0.0, kPi), ur(0.1, 4.0), uc(-1.0, 1.0);
  std::vector<TomographicPoint> line_pts{{0, 1, 0}}, circle_pts{{1, 0, 0}};
  for (int k = 0; k < 6; ++k) {
    const double t = uth(rng);
    line_pts.push_back({ux(rng), std::cos(t), std::sin(t)});
    circle_pts.push_back({ur(rng), uc(rng), uc(rng)});
  }

  for (const auto& [label, st] : states) {
    const Operator rho = density_matrix(st, dim);
    const auto wigner = weyl_symbol_grid(rho, wide_grid()).scaled(1.0 / (2.0 * kPi));
    s.check("weyl_round_trip/" + label, 1e-6, [&] {
      return weyl_reconstruct(weyl_symbol_grid(rho, wide_grid()), dim).frobenius_distance(rho);
    });
    s.check("commuting_square_symplectic/" + label, 1e-3,
            [&] { return commuting_square(rho, wigner, SchemeSpec::symplectic(), line_pts); });
    s.check("commuting_square_quadratic/" + label, 2e-3,
            [&] { return commuting_square(rho, wigner, SchemeSpec::quadratic(), circle_pts); });
  }

  const Operator rho = density_matrix(StateSpec::coherent({1, 0}), dim);
  s.check("truncation_convergence", 1e-3, [&] {
    const Operator bigger = density_matrix(StateSpec::coherent({1, 0}), dim + 8);
    double worst = 0.0;
    for (const auto& x : line_pts) {
      const cplx a = tomographic_symbol(rho, SchemeSpec::symplectic(), x);
      const cplx b = tomographic_symbol(bigger, SchemeSpec::symplectic(), x);
      worst = std::max(worst, std::abs(a - b));
    }
    return worst;
  }, "symplectic symbol at dim vs dim + 8");

  s.check("dequantizer_hermitian", 1e-10, [&] {
    double worst = 0.0;
    for (const auto& x : line_pts)
      worst = std::max(worst, scheme_dequantizer(SchemeSpec::symplectic(), x, dim).hermitian_defect());
    for (const auto& x : circle_pts)
      worst = std::max(worst, scheme_dequantizer(SchemeSpec::quadratic(), x, dim).hermitian_defect());
    return worst;
  });

  s.check("quantizer_reconstruction", 1e-6, [&] {
    const auto f = eval_state(StateSpec::coherent({1, 0}), wide_grid());
    const auto w = radon_forward_grid(f, linspace(-6, 6, 121), half_circle_angles(64));
    return operator_from_tomogram(w, SchemeSpec::symplectic(), dim).frobenius_distance(rho) /
           rho.matrix.norm();
  }, "coherent(1,0) from its symplectic tomogram");

  s.check("unit_trace", 1e-8, [&] {
    const auto f = eval_state(StateSpec::fock(1), wide_grid());
    return std::abs(star_trace(radon_forward_grid(f, linspace(-6, 6, 121), half_circle_angles(16))) - 1.0);
  });
}

void kernels_suite(Suite& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  auto near = [&](TomographicPoint x) {
    return TomographicPoint{x.X + jitter(rng), x.mu + jitter(rng), x.nu + jitter(rng)};
  };
  TestFunction plane;
  plane.eps = 0.1;
  plane.eps_m = 0.5;
  const SchemeKernel symp{SchemeSpec::symplectic(), 1.0};

  double twist_mod = 0.0;
  s.check("twist_factor", 1e-2, [&] {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto x1 = near({0.2, 1.0, 0.3}), x2 = near({-0.1, 0.2, 0.8}), x3 = near({0.3, 0.9, 0.9});
      const cplx qu = kernel_compose(symp, symp, symp, x1, x2, x3, plane).value;
      const cplx cl = classical_compose(symp, symp, symp, x1, x2, x3, plane, true).value;
      worst = std::max(worst, rel(qu, cl));
      twist_mod = std::max(twist_mod, std::abs(std::abs(qu) - std::abs(cl)) / std::abs(cl));
    }
    return worst;
  }, "6-D quantum kernel vs twisted classical kernel");
  s.check("twist_modulus", 1e-10, [&] { return twist_mod; });

  s.check("twist_unit_phase", 1e-15, [&] {
    std::uniform_real_distribution<double> u(-3, 3);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k)
      worst = std::max(worst, std::abs(std::abs(twist_apply(1.0, u(rng), u(rng), u(rng), u(rng))) - 1.0));
    return worst;
  });

  s.check("groenewald_cyclic", 1e-14, [&] {
    std::uniform_real_distribution<double> u(-2, 2);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), e = u(rng), f = u(rng);
      const cplx g = groenewald(a, b, c, d, e, f);
      worst = std::max({worst, std::abs(g - groenewald(c, d, e, f, a, b)) * kPi * kPi,
                        std::abs(std::abs(g) * kPi * kPi - 1.0)});
    }
    return worst;
  });

  s.check("groenewald_projector", 1e-6, [&] {
    const auto grid = make_grid(-6, 6, -6, 6, 121, 121);
    const auto f = eval_state(StateSpec::coherent({0.4, -0.2}), grid).scaled(2.0 * kPi);
    return relative_l2(groenewald_product(f, f), f);
  }, "Weyl symbol of a pure state is idempotent");

  s.check("groenewald_unit", 1e-12, [&] {
    const auto grid = make_grid(-6, 6, -6, 6, 121, 121);
    const auto f = eval_state(StateSpec::coherent({0.4, -0.2}), grid);
    const auto one = PhaseSpaceFunction::sample([](double, double) { return cplx(1.0); }, grid);
    return std::max(relative_l2(groenewald_product(one, f), f), relative_l2(groenewald_product(f, one), f));
  });

  s.check("thick_smearing", 1e-2, [&] {
    const auto rect = WindowFunction::rectangular(2.0);
    const SchemeKernel th{SchemeSpec::thick(rect), 1.0};
    const auto x1 = near({0.2, 1.0, 0.3}), x2 = near({-0.1, 0.2, 0.8}), x3 = near({0.3, 0.9, 0.9});
    const KernelEvaluator ideal(SchemeSpec::symplectic(), KernelMode::Oracle);
    const cplx oracle = kernel_compose(th, th, th, x1, x2, x3, plane).value;
    return rel(kernel_thick(ideal, rect, x1, x2, x3, plane).value, oracle);
  }, "window average of the ideal kernel vs 6-D thick oracle");

  TestFunction narrow = delta_smear(0.05);
  const SchemeKernel quad{SchemeSpec::quadratic(), 1.0};
  s.check("quadratic_closed_form", 1e-2, [&] {
    double worst = rel(kernel_quadratic({}, {}, {}, narrow),
                       kernel_compose(quad, quad, quad, {}, {}, {}, narrow).value);
    for (int k = 0; k < 2; ++k) {
      const auto x1 = near({0.3, 0.2, -0.1}), x2 = near({-0.2, 0.1, 0.3});
      TomographicPoint x3 = near({0.0, 0.0, 0.1});
      const double a = x1.mu + x2.mu - 2 * x3.mu + x2.nu - x1.nu;
      const double b = x1.nu + x2.nu - 2 * x3.nu + x1.mu - x2.mu;
      x3.X = 0.25 * (a * a + b * b) + 0.5 * jitter(rng) * narrow.eps;
      worst = std::max(worst, rel(kernel_quadratic(x1, x2, x3, narrow),
                                  kernel_compose(quad, quad, quad, x1, x2, x3, narrow).value));
    }
    return worst;
  }, "closed form vs 6-D oracle, incl. the all-zeros point");

  s.check("quadratic_noncommutativity", 1.0, [&] {
    const TomographicPoint x1{0, 1, 0}, x2{0, 0, 0}, x3{0.25, 0, 0.5};
    const cplx k12 = kernel_quadratic(x1, x2, x3, narrow);
    const cplx k21 = kernel_quadratic(x2, x1, x3, narrow);
    return 0.1 * std::max(std::abs(k12), std::abs(k21)) / std::abs(k12 - k21);
  }, "0.1 max|K| / |K(x1,x2,.) - K(x2,x1,.)|, below 1 when the kernel is asymmetric");
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["suite"] = options.suite;
  j["dim"] = options.dim;
  j["seed"] = options.seed;
  j["passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e{{"suite", c.suite}, {"name", c.name}, {"passed", c.passed},
                     {"tolerance", c.tolerance}};
    if (std::isfinite(c.error)) e["error"] = c.error;
    else e["error"] = nullptr;
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2);
}

VerifyReport run_verify(const VerifyOptions& options) {
  const std::string& name = options.suite;
  if (name != "all" && name != "classical" && name != "quantum" && name != "kernels")
    throw Error(ErrorKind::BadInput, "unknown suite '" + name + "'");
  if (options.dim < 2) throw Error(ErrorKind::InvalidDim, "dim must be >= 2");
  VerifyReport report{options, {}};
  std::mt19937_64 rng(options.seed);
  if (name == "all" || name == "classical") {
    Suite s{"classical", report.checks};
    classical_suite(s, rng);
  }
  if (name == "all" || name == "quantum") {
    Suite s{"quantum", report.checks};
    quantum_suite(s, rng, options.dim);
  }
  if (name == "all" || name == "kernels") {
    Suite s{"kernels", report.checks};
    kernels_suite(s, rng);
  }
  return report;
}

}  // namespace tomo
