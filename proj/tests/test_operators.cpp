#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/operators.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/symplectic.hpp"

using namespace tomo;

namespace {

const PhaseSpaceGrid& wide() {
  static const PhaseSpaceGrid g = make_grid(-8, 8, -8, 8, 161, 161);
  return g;
}

// Coherent-state vector e^{-|a|^2/2} a^n / sqrt(n!), independent of the library.
Eigen::VectorXcd coherent_vector(cplx a, int dim) {
  Eigen::VectorXcd v(dim);
  v(0) = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * a / std::sqrt(static_cast<double>(n));
  return v;
}

Operator projector(const Eigen::VectorXcd& v) {
  Operator o = Operator::zero(static_cast<int>(v.size()));
  o.matrix = v * v.adjoint();
  return o;
}

}  // namespace

TEST_SUITE("operator_algebra") {
  TEST_CASE("ladder operators") {
    const auto [a2, ad2] = ladder_ops(2);
    CHECK(a2.matrix(0, 1) == cplx(1.0));
    CHECK(a2.matrix(1, 0) == cplx(0.0));
    CHECK(ad2.matrix(1, 0) == cplx(1.0));
    CHECK_THROWS_AS(ladder_ops(1), Error);
    const int n = 8;
    const Operator q = position_op(n), p = momentum_op(n);
    const Eigen::MatrixXcd comm = q.matrix * p.matrix - p.matrix * q.matrix;
    for (int k = 0; k < n - 1; ++k) CHECK(std::abs(comm(k, k) - kI) < 1e-14);
    CHECK(std::abs(comm(n - 1, n - 1) + kI * static_cast<double>(n - 1)) < 1e-13);
    const Operator num = number_op(n);
    for (int k = 0; k < n; ++k) CHECK(num.matrix(k, k).real() == doctest::Approx(k));
  }

  TEST_CASE("parity") {
    const Operator par = parity(16);
    CHECK((par.matrix * par.matrix - Eigen::MatrixXcd::Identity(16, 16)).norm() == 0.0);
    CHECK(par.trace() == cplx(0.0));
    CHECK(par.matrix(1, 1) == cplx(-1.0));
  }

  TEST_CASE("displacement matches the coherent vector and is unitary away from the corner") {
    const int dim = 24;
    const cplx beta{0.6, -0.3};
    const Eigen::MatrixXcd d = displacement(beta, dim);
    CHECK((d.col(0) - coherent_vector(beta, dim)).norm() < 1e-13);
    const Eigen::MatrixXcd u = d.adjoint() * d;
    CHECK((u.topLeftCorner(8, 8) - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-8);
  }

  TEST_CASE("weyl_D") {
    const Operator d0 = weyl_D(0, 0, 16);
    CHECK((d0.matrix - parity(16).matrix / kPi).norm() < 1e-15);
    const Operator rho0 = projector(coherent_vector(0.0, 16));
    CHECK(std::abs((rho0.matrix * d0.matrix).trace() * kPi - 1.0) < 1e-14);
    CHECK_THROWS_AS(weyl_D_checked(6.0, 0.0, 8), Error);
    CHECK(displacement_leakage(0.1, 0.0, 16) < 1e-6);
  }

  TEST_CASE("Weyl symbols") {
    const Operator rho0 = projector(coherent_vector(0.0, 16));
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(16);
    one(1) = 1.0;
    const Operator rho1 = projector(one);
    CHECK(std::abs(weyl_symbol(rho0, 0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(weyl_symbol(rho1, 0, 0) + 2.0) < 1e-14);
    // symbol / 2pi is the Wigner function
    const auto w = eval_state(StateSpec::coherent({0.5, 0.2}), make_grid(-2, 2, -2, 2, 5, 5));
    const Operator rho = projector(coherent_vector({0.5, 0.2}, 24));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        CHECK(std::abs(weyl_symbol(rho, w.grid().q(i), w.grid().p(j)) / (2.0 * kPi) - w.values()(i, j)) < 1e-12);
  }

  TEST_CASE("weyl_reconstruct round trips") {
    const Operator rho0 = projector(coherent_vector(0.0, 16));
    CHECK(weyl_reconstruct(weyl_symbol_grid(rho0, wide()), 16).frobenius_distance(rho0) < 1e-6);
    const Operator zero = weyl_reconstruct(PhaseSpaceFunction::zero(wide()), 16);
    CHECK(zero.matrix.norm() == 0.0);
    const Operator rho = weyl_reconstruct(weyl_symbol_grid(density_matrix(StateSpec::coherent({1, 0}), 16), wide()), 16);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-6);
    CHECK(std::abs((rho.matrix * rho.matrix).trace() - 1.0) < 1e-5);
    const auto narrow = weyl_symbol_grid(rho0, make_grid(-1.5, 1.5, -1.5, 1.5, 31, 31));
    CHECK_THROWS_AS(weyl_reconstruct(narrow, 16), Error);
  }

  TEST_CASE("density matrices") {
    const Operator rho = density_matrix(StateSpec::coherent({1, 0.5}), 16);
    CHECK(rho.hermitian_defect() < 1e-10);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
    CHECK((rho.matrix - projector(coherent_vector({1, 0.5}, 16)).matrix).norm() < 1e-6);
    const Operator th = density_matrix(StateSpec::thermal(0.3), 16);
    for (int n = 0; n < 5; ++n)
      CHECK(th.matrix(n, n).real() == doctest::Approx(std::pow(0.3, n) / std::pow(1.3, n + 1)).epsilon(1e-10));
    try {
      density_matrix(StateSpec::coherent({4, 0}), 8);
      FAIL("expected LeakageExceeded");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::LeakageExceeded);
    }
  }

  TEST_CASE("quantizer and dequantizer values") {
    const Operator chi = scheme_quantizer(SchemeSpec::symplectic(), {0, 0, 0}, 8);
    CHECK((chi.matrix - Eigen::MatrixXcd::Identity(8, 8) / (2.0 * kPi)).norm() < 1e-14);
    const Operator rho0 = density_matrix(StateSpec::coherent({0, 0}), 16);
    CHECK(std::abs(tomographic_symbol(rho0, SchemeSpec::symplectic(), {0, 1, 0}) - 1.0 / std::sqrt(kPi)) < 1e-3);
    for (double X : {-0.8, 0.5, 1.4})
      CHECK(std::abs(tomographic_symbol(rho0, SchemeSpec::symplectic(), {X, 1, 0}) -
                     std::exp(-X * X) / std::sqrt(kPi)) < 1e-3);
    CHECK(std::abs(tomographic_symbol(rho0, SchemeSpec::quadratic(), {1, 0, 0}) - std::exp(-1.0)) < 2e-3);
    const Operator id = Operator::identity(16);
    for (double X : {-1.0, 0.0, 2.0}) CHECK(tomographic_symbol(id, SchemeSpec::symplectic(), {X, 1, 0}).real() > 0.0);
    // thick dequantizer of the vacuum: rectangular window gives erf differences
    const auto rect = WindowFunction::rectangular(2.0);
    CHECK(std::abs(tomographic_symbol(rho0, SchemeSpec::thick(rect), {0, 1, 0}) - std::erf(1.0)) < 1e-3);
  }

  TEST_CASE("symplectic operator_from_tomogram and pairing") {
    for (cplx a : {cplx(0, 0), cplx(1, 0)}) {
      const Operator rho = density_matrix(StateSpec::coherent(a), 16);
      const auto w = radon_forward_grid(eval_state(StateSpec::coherent(a), wide()), linspace(-6, 6, 121),
                                        half_circle_angles(64));
      const Operator rec = operator_from_tomogram(w, SchemeSpec::symplectic(), 16);
      CHECK(rec.frobenius_distance(rho) <= 1e-3 * rho.matrix.norm());
      CHECK(std::abs(rec.trace() - 1.0) < 1e-3);
      for (std::size_t k : {std::size_t{60}, std::size_t{10 * 121 + 70}, std::size_t{40 * 121 + 55}})
        CHECK(std::abs(tomographic_symbol(rec, SchemeSpec::symplectic(), w.points[k]) - w.values[k]) <
              1e-3 * std::max(std::abs(w.values[k]), 1e-3));
    }
  }

  TEST_CASE("thick operator_from_tomogram") {
    const auto xi = WindowFunction::gaussian(0.5);
    const Operator rho = density_matrix(StateSpec::coherent({0.5, 0}), 16);
    const auto w = thick_forward_grid(eval_state(StateSpec::coherent({0.5, 0}), wide()), xi,
                                      linspace(-6, 6, 121), half_circle_angles(64));
    CHECK(operator_from_tomogram(w, SchemeSpec::thick(xi), 16).frobenius_distance(rho) <= 1e-3 * rho.matrix.norm());
    const auto rect = WindowFunction::rectangular(2.0);
    const auto wr = thick_forward_grid(eval_state(StateSpec::coherent({0.5, 0}), wide()), rect,
                                       linspace(-6, 6, 121), half_circle_angles(64));
    try {
      operator_from_tomogram(wr, SchemeSpec::thick(rect), 16);
      FAIL("expected SingularWindow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SingularWindow);
    }
  }

  TEST_CASE("quadratic operator_from_tomogram") {
    const QuadraticLattice lattice;
    const double reach = lattice.center_extent + std::sqrt(lattice.x_max) + 0.5;
    const int n = static_cast<int>(std::ceil(2.0 * reach / 0.1)) + 1;
    const auto src = eval_state(StateSpec::coherent({0, 0}), make_grid(-reach, reach, -reach, reach, n, n));
    const Operator rho = density_matrix(StateSpec::coherent({0, 0}), 16);
    const Operator rec = operator_from_tomogram(quadratic_tomogram(src, lattice), SchemeSpec::quadratic(), 16);
    CHECK(rec.frobenius_distance(rho) <= 5e-2 * rho.matrix.norm());
  }
}
