#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/quadratic.hpp"

using namespace tomo;

namespace {

const PhaseSpaceGrid& grid() {
  static const PhaseSpaceGrid g = make_grid(-8, 8, -8, 8, 161, 161);
  return g;
}

// Circle average of the coherent Wigner function centred at distance d from
// the circle's centre: (1/2) int dphi (1/pi) e^{-(X + d^2 - 2 sqrt(X) d cos phi)}.
double coherent_circle(double X, double d) {
  return std::exp(-X - d * d) * std::cyl_bessel_i(0.0, 2.0 * std::sqrt(X) * d);
}

PhaseSpaceGrid lattice_source(const QuadraticLattice& lattice) {
  const double reach = lattice.center_extent + std::sqrt(lattice.x_max) + 0.5;
  const int n = static_cast<int>(std::ceil(2.0 * reach / 0.1)) + 1;
  return make_grid(-reach, reach, -reach, reach, n, n);
}

}  // namespace

TEST_SUITE("quadratic") {
  TEST_CASE("vacuum circle averages") {
    const auto w0 = eval_state(StateSpec::coherent({0, 0}), grid());
    CHECK(circle_forward(w0, {1, 0, 0}).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(circle_forward(w0, {-1, 0, 0}) == cplx(0.0));
    CHECK(circle_forward(w0, {0, 0, 0}) == cplx(0.0));
    for (double X : {0.3, 2.0, 5.0}) CHECK(std::abs(circle_forward(w0, {X, 0, 0}) - std::exp(-X)) < 1e-10);
  }

  TEST_CASE("off-centre circles match the Bessel closed form") {
    const cplx a{0.5, -0.3};
    const auto f = eval_state(StateSpec::coherent(a), grid());
    const double q0 = std::sqrt(2.0) * a.real(), p0 = std::sqrt(2.0) * a.imag();
    for (const TomographicPoint& x : {TomographicPoint{0.8, 0.2, 0.4}, TomographicPoint{2.5, -1.0, 0.3}}) {
      const double d = std::hypot(x.mu - q0, x.nu - p0);
      CHECK(std::abs(circle_forward(f, x) - coherent_circle(x.X, d)) < 1e-9);
    }
  }

  TEST_CASE("normalization over X") {
    Tomogram w = circle_forward_grid(eval_state(StateSpec::coherent({0, 0}), grid()),
                                     [] {
                                       std::vector<double> x;
                                       for (int k = 0; k < 400; ++k) x.push_back(0.05 * (k + 0.5));
                                       return x;
                                     }(),
                                     std::vector<double>{-0.1, 0.1}, std::vector<double>{-0.1, 0.1});
    for (cplx v : center_integrals(w)) CHECK(std::abs(v - 1.0) < 1e-3);
  }

  TEST_CASE("translation covariance and rotation invariance") {
    const Eigen::Matrix2d cov = Eigen::Vector2d(0.6, 0.4).asDiagonal();
    const auto f = eval_state(StateSpec::gaussian({0, 0}, cov), grid());
    const auto g = eval_state(StateSpec::gaussian({0.7, -0.4}, cov), grid());
    for (const TomographicPoint& x : {TomographicPoint{1.1, 0.3, 0.2}, TomographicPoint{0.4, -0.5, 0.9}})
      CHECK(std::abs(circle_forward(g, x) - circle_forward(f, {x.X, x.mu - 0.7, x.nu + 0.4})) < 1e-6);
    // rotation-invariant about the centre: the average is pi times the radial profile
    const auto f1 = eval_state(StateSpec::fock(1), grid());
    for (double X : {0.2, 0.5, 1.7}) CHECK(std::abs(circle_forward(f1, {X, 0, 0}) + std::exp(-X) * (1.0 - 2.0 * X)) < 1e-10);
  }

  TEST_CASE("TruncatedSupport when the circle leaves the grid") {
    const auto f = eval_state(StateSpec::coherent({0, 0}), make_grid(-2, 2, -2, 2, 41, 41));
    try {
      circle_forward(f, {1.0, 1.5, 0.0});
      FAIL("expected TruncatedSupport");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TruncatedSupport);
    }
  }

  TEST_CASE("zero tomogram inverts to zero") {
    const QuadraticLattice lattice{2.0, 0.5, 0.5, 9.0};
    auto w = quadratic_tomogram(eval_state(StateSpec::coherent({0, 0}), lattice_source(lattice)), lattice);
    std::fill(w.values.begin(), w.values.end(), cplx(0.0));
    CHECK(quadratic_inverse(w, make_grid(-2, 2, -2, 2, 11, 11)).max_abs() == 0.0);
  }

  TEST_CASE("NonConvergent on a lattice that does not cover the integrand") {
    const QuadraticLattice small{2.0, 0.2, 0.2, 121.0};
    const auto w = quadratic_tomogram(eval_state(StateSpec::coherent({0, 0}), lattice_source(small)), small);
    try {
      quadratic_inverse(w, make_grid(-2, 2, -2, 2, 21, 21));
      FAIL("expected NonConvergent");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonConvergent);
    }
  }

  TEST_CASE("inverse: peak location and the literal-prefactor mass") {
    const QuadraticLattice lattice;
    const StateSpec st = StateSpec::coherent({1, 0});
    const auto w = quadratic_tomogram(eval_state(st, lattice_source(lattice)), lattice);
    const auto target = make_grid(-4, 4, -4, 4, 41, 41);
    const auto rec = quadratic_inverse(w, target);
    Eigen::Index i = 0, j = 0;
    rec.values().real().maxCoeff(&i, &j);
    CHECK(std::abs(target.q(static_cast<int>(i)) - std::sqrt(2.0)) <= target.dq());
    CHECK(std::abs(target.p(static_cast<int>(j))) <= target.dp());
    CHECK(relative_l2(rec, eval_state(st, target)) < 5e-2);
    QuadraticInverseOptions literal;
    literal.c = 1.0;
    CHECK(integrate(quadratic_inverse(w, target, literal)).real() == doctest::Approx(kPi).epsilon(2e-2));
  }

  TEST_CASE("calibration against the vacuum") {
    const StateSpec refs[] = {StateSpec::coherent({0, 0})};
    const Calibration cal = calibrate_inverse_constant(refs);
    CHECK(std::abs(cal.c - 1.0 / kPi) < 0.05 / kPi);
  }

  TEST_CASE("inverse input validation") {
    Tomogram w;
    w.scheme = Scheme::Symplectic;
    CHECK_THROWS_AS(quadratic_inverse(w, make_grid(-1, 1, -1, 1, 3, 3)), Error);
  }
}
