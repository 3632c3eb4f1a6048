#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/symplectic.hpp"

using namespace tomo;

namespace {

// Analytic marginals of Gaussian-family Wigner functions along mu q + nu p = X,
// including the 1/|m| Jacobian.
double coherent_marginal(cplx alpha, const TomographicPoint& x) {
  const double s2 = x.mu * x.mu + x.nu * x.nu;
  const double centre = std::sqrt(2.0) * (x.mu * alpha.real() + x.nu * alpha.imag());
  return std::exp(-(x.X - centre) * (x.X - centre) / s2) / std::sqrt(kPi * s2);
}

double fock1_marginal(const TomographicPoint& x) {
  const double s2 = x.mu * x.mu + x.nu * x.nu;
  return 2.0 * x.X * x.X / s2 * std::exp(-x.X * x.X / s2) / std::sqrt(kPi * s2);
}

const PhaseSpaceGrid& grid() {
  static const PhaseSpaceGrid g = make_grid(-8, 8, -8, 8, 161, 161);
  return g;
}

}  // namespace

TEST_SUITE("symplectic") {
  TEST_CASE("vacuum line integrals") {
    const auto w0 = eval_state(StateSpec::coherent({0, 0}), grid());
    CHECK(radon_forward(w0, {0, 1, 0}).real() == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-10));
    for (double t : {0.3, 1.1, 2.5})
      CHECK(radon_forward(w0, {0, std::cos(t), std::sin(t)}).real() ==
            doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-10));
    CHECK(radon_forward(w0, {0, 2, 0}).real() == doctest::Approx(0.5 / std::sqrt(kPi)).epsilon(1e-10));
  }

  TEST_CASE("marginals of coherent and Fock states") {
    const cplx a{0.7, -0.4};
    const auto fc = eval_state(StateSpec::coherent(a), grid());
    const auto f1 = eval_state(StateSpec::fock(1), grid());
    for (const TomographicPoint& x : {TomographicPoint{0.4, 1, 0}, TomographicPoint{-0.9, 0.6, 0.8},
                                      TomographicPoint{1.3, -0.5, 1.5}}) {
      CHECK(std::abs(radon_forward(fc, x) - coherent_marginal(a, x)) < 1e-10);
      CHECK(std::abs(radon_forward(f1, x) - fock1_marginal(x)) < 1e-10);
    }
  }

  TEST_CASE("interpolated samples without analytic backing") {
    const auto exact = eval_state(StateSpec::coherent({0, 0}), grid());
    const PhaseSpaceFunction plain(exact.grid(), exact.values());
    CHECK(std::abs(radon_forward(plain, {0.5, 0.6, 0.8}) - coherent_marginal(0, {0.5, 0.6, 0.8})) < 5e-3);
  }

  TEST_CASE("errors") {
    const auto w0 = eval_state(StateSpec::coherent({0, 0}), grid());
    CHECK_THROWS_AS(radon_forward(w0, {0, 0, 0}), Error);
    const auto narrow = eval_state(StateSpec::coherent({0, 0}), make_grid(-2, 2, -2, 2, 41, 41));
    try {
      radon_forward(narrow, {0, 1, 0});
      FAIL("expected TruncatedSupport");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TruncatedSupport);
    }
  }

  TEST_CASE("grid tomogram: normalization, positivity, peak") {
    const auto xs = linspace(-6, 6, 121);
    const auto th = half_circle_angles(64);
    const auto w0 = radon_forward_grid(eval_state(StateSpec::coherent({0, 0}), grid()), xs, th);
    REQUIRE(w0.has_theta_lattice());
    CHECK(w0.values.size() == 121 * 64);
    for (cplx v : slice_integrals(w0)) CHECK(std::abs(v - 1.0) < 1e-3);
    const auto w1 = radon_forward_grid(eval_state(StateSpec::fock(1), grid()), xs, th);
    for (cplx v : slice_integrals(w1)) CHECK(std::abs(v - 1.0) < 1e-3);
    double lowest = 0.0;
    for (cplx v : w1.values) lowest = std::min(lowest, v.real());
    CHECK(lowest >= -1e-9);
    const auto wa = radon_forward_grid(eval_state(StateSpec::coherent({1, 0}), grid()), xs, th);
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (wa.at_theta(0, i).real() > wa.at_theta(0, best).real()) best = i;
    CHECK(xs[best] == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  }

  TEST_CASE("homogeneity and linearity") {
    const auto f = eval_state(StateSpec::coherent({0.3, 0.2}), grid());
    const auto g = eval_state(StateSpec::fock(2), grid());
    const TomographicPoint x{0.4, 0.7, -0.5};
    const cplx base = radon_forward(f, x);
    for (double l : {-2.0, 0.5, 3.0})
      CHECK(std::abs(std::abs(l) * radon_forward(f, {l * x.X, l * x.mu, l * x.nu}) - base) < 1e-6 * std::abs(base));
    const cplx a{2.0, 1.0}, b{-0.5, 0.0};
    CHECK(std::abs(radon_forward(f.scaled(a).plus(g.scaled(b)), x) -
                   (a * radon_forward(f, x) + b * radon_forward(g, x))) < 1e-14);
  }

  TEST_CASE("round trip and reconstruction peak") {
    const auto xs = linspace(-6, 6, 121);
    const auto th = half_circle_angles(64);
    const auto target = make_grid(-5, 5, -5, 5, 101, 101);
    for (cplx a : {cplx(0, 0), cplx(1, 0)}) {
      const auto w = radon_forward_grid(eval_state(StateSpec::coherent(a), grid()), xs, th);
      const auto rec = radon_inverse(w, target);
      CHECK(relative_l2(rec, eval_state(StateSpec::coherent(a), target)) <= 1e-3);
      const auto m = moments(rec);
      CHECK(m.mean_q == doctest::Approx(std::sqrt(2.0) * a.real()).epsilon(1e-3));
    }
  }

  TEST_CASE("zero tomogram inverts to zero") {
    Tomogram w;
    w.x_axis = linspace(-6, 6, 121);
    w.theta_axis = half_circle_angles(16);
    for (double t : w.theta_axis)
      for (double x : w.x_axis) w.points.push_back({x, std::cos(t), std::sin(t)});
    w.values.assign(w.points.size(), 0.0);
    CHECK(radon_inverse(w, make_grid(-4, 4, -4, 4, 41, 41)).max_abs() == 0.0);
  }

  TEST_CASE("inverse errors") {
    const auto f = eval_state(StateSpec::coherent({0, 0}), grid());
    const auto few = radon_forward_grid(f, linspace(-6, 6, 121), half_circle_angles(6));
    try {
      radon_inverse(few, make_grid(-4, 4, -4, 4, 41, 41));
      FAIL("expected InsufficientAngles");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientAngles);
    }
    const auto coarse = radon_forward_grid(f, linspace(-6, 6, 25), half_circle_angles(32));
    try {
      radon_inverse(coarse, make_grid(-4, 4, -4, 4, 81, 81));
      FAIL("expected AliasedSpectrum");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AliasedSpectrum);
    }
  }
}
