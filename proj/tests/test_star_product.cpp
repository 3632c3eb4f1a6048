#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/operators.hpp"
#include "tomo/star_product.hpp"
#include "tomo/symplectic.hpp"

using namespace tomo;

namespace {

const PhaseSpaceGrid& wide() {
  static const PhaseSpaceGrid g = make_grid(-8, 8, -8, 8, 161, 161);
  return g;
}

Tomogram symplectic_tomogram(const StateSpec& s) {
  return radon_forward_grid(eval_state(s, wide()), linspace(-6, 6, 121), half_circle_angles(64));
}

}  // namespace

TEST_SUITE("star_product") {
  TEST_CASE("Moyal product of Weyl symbols matches the matrix product") {
    const int dim = 24;
    const auto grid = make_grid(-6, 6, -6, 6, 121, 121);
    const Operator a = density_matrix(StateSpec::coherent({0.4, 0.1}), dim);
    const Operator b = density_matrix(StateSpec::coherent({-0.3, 0.5}), dim);
    Operator ab = Operator::zero(dim);
    ab.matrix = a.matrix * b.matrix;
    const auto prod = groenewald_product(weyl_symbol_grid(a, grid), weyl_symbol_grid(b, grid));
    CHECK(relative_l2(prod, weyl_symbol_grid(ab, grid)) < 1e-6);
  }

  TEST_CASE("Moyal product: projector, orthogonality, unit") {
    const auto grid = make_grid(-6, 6, -6, 6, 121, 121);
    const auto f0 = eval_state(StateSpec::coherent({0, 0}), grid).scaled(2.0 * kPi);
    const auto f1 = eval_state(StateSpec::fock(1), grid).scaled(2.0 * kPi);
    CHECK(relative_l2(groenewald_product(f0, f0), f0) < 1e-8);
    CHECK(groenewald_product(f0, f1).max_abs() < 1e-8);
    const auto one = PhaseSpaceFunction::sample([](double, double) { return cplx(1.0); }, grid);
    CHECK(relative_l2(groenewald_product(one, f1), f1) < 1e-12);
    CHECK_THROWS_AS(groenewald_product(f0, eval_state(StateSpec::fock(1), make_grid(-6, 6, -6, 6, 61, 61))), Error);
  }

  TEST_CASE("symplectic star trace: purity and orthogonality") {
    const KernelEvaluator k(SchemeSpec::symplectic(), KernelMode::ClosedForm);
    const auto w0 = symplectic_tomogram(StateSpec::coherent({0, 0}));
    const auto w1 = symplectic_tomogram(StateSpec::fock(1));
    CHECK(std::abs(star_trace(w0) - 1.0) < 1e-8);
    CHECK(std::abs(star_trace(star_product(w0, w0, k)) - 1.0) < 1e-2);
    CHECK(std::abs(star_trace(star_product(w1, w1, k)) - 1.0) < 1e-2);
    CHECK(std::abs(star_trace(star_product(w0, w1, k))) < 1e-2);
    // the star product of a projector with itself is the projector
    const auto p = star_product(w0, w0, k);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      num += std::norm(p.values[i] - w0.values[i]);
      den += std::norm(w0.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-2);
  }

  TEST_CASE("thick star product is rejected") {
    const auto xi = WindowFunction::gaussian(0.5);
    const KernelEvaluator k(SchemeSpec::thick(xi), KernelMode::ClosedForm);
    auto w = symplectic_tomogram(StateSpec::coherent({0, 0}));
    w.scheme = Scheme::Thick;
    CHECK_THROWS_AS(star_product(w, w, k), Error);
  }

  TEST_CASE("star_trace needs a lattice") {
    Tomogram w;
    w.points.push_back({0, 1, 0});
    w.values.push_back(1.0);
    CHECK_THROWS_AS(star_trace(w), Error);
  }
}
