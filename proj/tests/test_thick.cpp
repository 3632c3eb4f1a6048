#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/symplectic.hpp"
#include "tomo/thick.hpp"

using namespace tomo;

namespace {

const PhaseSpaceGrid& grid() {
  static const PhaseSpaceGrid g = make_grid(-8, 8, -8, 8, 161, 161);
  return g;
}

// Vacuum marginal along a direction of length s is a Gaussian of variance s^2/2;
// convolving with the window gives these closed forms.
double vacuum_rect(double X, double s, double delta) {
  return 0.5 * (std::erf((X + 0.5 * delta) / s) - std::erf((X - 0.5 * delta) / s));
}

double vacuum_gauss(double X, double s, double sigma) {
  const double var = 0.5 * s * s + sigma * sigma;
  return std::exp(-X * X / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

Tomogram slice(const PhaseSpaceFunction& f, double theta, double dx = 0.05) {
  const int n = static_cast<int>(std::lround(12.0 / dx)) + 1;
  const std::vector<double> th{theta};
  return radon_forward_grid(f, linspace(-6, 6, n), th);
}

}  // namespace

TEST_SUITE("thick") {
  TEST_CASE("window normalization") {
    CHECK(std::abs(window_normalization(WindowFunction::rectangular(kPi)) - 0.5) < 1e-12);
    CHECK(std::abs(window_normalization(WindowFunction::rectangular(2.0)) - 1.0 / (2.0 * std::sin(1.0))) < 1e-12);
    CHECK(std::abs(window_normalization(WindowFunction::gaussian(1.0)) - std::exp(0.5)) < 1e-12);
    try {
      window_normalization(WindowFunction::rectangular(2.0 * kPi));
      FAIL("expected SingularWindow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SingularWindow);
    }
    // triangle of half-width a: int (1 - |z|/a) e^{iz} dz = 2 (1 - cos a) / a^2 times a
    const double a = 1.5;
    const auto tri = WindowFunction::custom({-a, 0.0, a}, {0.0, 1.0, 0.0});
    CHECK(std::abs(1.0 / window_normalization(tri) - 2.0 * (1.0 - std::cos(a)) / a) < 1e-12);
  }

  TEST_CASE("window values and negative samples") {
    const auto r = WindowFunction::rectangular(2.0);
    CHECK(r(0.5) == 1.0);
    CHECK(r(1.5) == 0.0);
    CHECK(WindowFunction::gaussian(0.5)(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi * 0.25)));
    CHECK_THROWS_AS(WindowFunction::custom({0, 1, 2}, {0, -1, 0}), Error);
  }

  TEST_CASE("thick_forward closed forms for the vacuum") {
    const auto w0 = eval_state(StateSpec::coherent({0, 0}), grid());
    const auto rect = WindowFunction::rectangular(2.0);
    const auto gauss = WindowFunction::gaussian(1.0);
    CHECK(thick_forward(w0, rect, {0, 1, 0}).real() == doctest::Approx(std::erf(1.0)).epsilon(1e-9));
    CHECK(thick_forward(w0, gauss, {0, 1, 0}).real() == doctest::Approx(1.0 / std::sqrt(3.0 * kPi)).epsilon(1e-9));
    for (const TomographicPoint& x : {TomographicPoint{0.7, 0.6, 0.8}, TomographicPoint{-1.1, 1.2, -0.4}}) {
      const double s = std::hypot(x.mu, x.nu);
      CHECK(std::abs(thick_forward(w0, rect, x) - vacuum_rect(x.X, s, 2.0)) < 1e-9);
      CHECK(std::abs(thick_forward(w0, gauss, x) - vacuum_gauss(x.X, s, 1.0)) < 1e-9);
    }
  }

  TEST_CASE("nascent delta window reproduces the ideal tomogram") {
    const auto f = eval_state(StateSpec::coherent({0.4, 0.1}), grid());
    const auto delta = WindowFunction::gaussian(1e-3);
    for (const TomographicPoint& x : {TomographicPoint{0.2, 1, 0}, TomographicPoint{0.9, 0.6, 0.8}})
      CHECK(std::abs(thick_forward(f, delta, x) - radon_forward(f, x)) < 1e-4);
    const auto s = slice(f, 0.7);
    const auto t = thick_from_ideal(s, delta);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) worst = std::max(worst, std::abs(t.values[i] - s.values[i]));
    CHECK(worst < 1e-4);
  }

  TEST_CASE("thick_from_ideal matches thick_forward") {
    const auto f = eval_state(StateSpec::coherent({0.3, -0.5}), grid());
    const double theta = 1.2;
    const auto s = slice(f, theta);
    for (const auto& xi : {WindowFunction::rectangular(2.0), WindowFunction::gaussian(1.0),
                           WindowFunction::custom({-1.0, -0.2, 0.5, 1.0}, {0.0, 1.0, 0.6, 0.0})}) {
      const auto t = thick_from_ideal(s, xi);
      double worst = 0.0;
      for (std::size_t i = 0; i < s.x_axis.size(); i += 5) {
        if (std::abs(s.x_axis[i]) > 3.0) continue;
        const cplx direct = thick_forward(f, xi, {s.x_axis[i], std::cos(theta), std::sin(theta)});
        worst = std::max(worst, std::abs(t.values[i] - direct));
      }
      CHECK(worst < 1e-6);
    }
  }

  TEST_CASE("zero slice stays zero") {
    auto s = slice(eval_state(StateSpec::coherent({0, 0}), grid()), 0.0);
    std::fill(s.values.begin(), s.values.end(), cplx(0.0));
    for (cplx v : thick_from_ideal(s, WindowFunction::rectangular(1.0)).values) CHECK(v == cplx(0.0));
  }

  TEST_CASE("unresolved custom window") {
    const auto s = slice(eval_state(StateSpec::coherent({0, 0}), grid()), 0.0, 0.2);
    const auto spike = WindowFunction::custom({-0.05, 0.0, 0.05}, {0.0, 1.0, 0.0});
    try {
      thick_from_ideal(s, spike);
      FAIL("expected UnresolvedWindow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnresolvedWindow);
    }
  }

  TEST_CASE("mass preservation and monotone limit") {
    const auto f = eval_state(StateSpec::fock(1), grid());
    const auto xs = linspace(-6, 6, 241);
    const auto th = half_circle_angles(8);
    const auto ideal = radon_forward_grid(f, xs, th);
    const auto thick = thick_forward_grid(f, WindowFunction::gaussian(0.5), xs, th);
    for (cplx v : slice_integrals(thick)) CHECK(std::abs(v - 1.0) < 1e-3);
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma : {0.3, 0.1, 0.03}) {
      const auto t = thick_from_ideal(ideal, WindowFunction::gaussian(sigma));
      double sup = 0.0;
      for (std::size_t i = 0; i < t.values.size(); ++i) sup = std::max(sup, std::abs(t.values[i] - ideal.values[i]));
      CHECK(sup < previous);
      previous = sup;
    }
  }

  TEST_CASE("grid and pointwise paths agree") {
    const auto f = eval_state(StateSpec::coherent({0.2, 0.2}), grid());
    const auto xi = WindowFunction::rectangular(1.5);
    const auto xs = linspace(-5, 5, 101);
    const auto th = half_circle_angles(4);
    const auto w = thick_forward_grid(f, xi, xs, th);
    for (std::size_t t = 0; t < th.size(); ++t)
      for (std::size_t i = 10; i < xs.size(); i += 20)
        CHECK(std::abs(w.at_theta(t, i) - thick_forward(f, xi, {xs[i], std::cos(th[t]), std::sin(th[t])})) < 1e-6);
  }
}
