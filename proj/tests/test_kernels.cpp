#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/kernels.hpp"

using namespace tomo;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TestFunction plane_test() {
  TestFunction t;
  t.eps = 0.1;
  t.eps_m = 0.5;
  return t;
}

const TomographicPoint kX1{0.2, 1.0, 0.3}, kX2{-0.1, 0.2, 0.8}, kX3{0.3, 0.9, 0.9};

}  // namespace

TEST_SUITE("star_kernels") {
  TEST_CASE("Groenewald kernel") {
    const double q1 = 0.3, p1 = -0.2, q2 = 1.1, p2 = 0.4, q3 = -0.7, p3 = 0.5;
    const double s = (q1 * p2 - q2 * p1) + (q2 * p3 - q3 * p2) + (q3 * p1 - q1 * p3);
    CHECK(std::abs(groenewald(q1, p1, q2, p2, q3, p3) - std::exp(2.0 * kI * s) / (kPi * kPi)) < 1e-15);
    CHECK(std::abs(groenewald(0, 0, 0, 0, 0, 0) - 1.0 / (kPi * kPi)) < 1e-16);
    // swapping two arguments reverses the orientation
    CHECK(std::abs(groenewald(q2, p2, q1, p1, q3, p3) - std::conj(groenewald(q1, p1, q2, p2, q3, p3))) < 1e-15);
  }

  TEST_CASE("quadratic closed form against the 6-D oracle") {
    const TestFunction t = delta_smear(0.05);
    const SchemeKernel q{SchemeSpec::quadratic(), 1.0};
    // all-zeros point: (2/(i pi^3)) t(0) / 4
    const cplx zero = kernel_quadratic({}, {}, {}, t);
    CHECK(std::abs(zero - 2.0 / (kI * kPi * kPi * kPi) * t(0.0) * 0.25) < 1e-15);
    for (const auto& [x1, x2, x3] : {std::tuple{TomographicPoint{}, TomographicPoint{}, TomographicPoint{}},
                                     std::tuple{TomographicPoint{0.3, 0.2, -0.1}, TomographicPoint{-0.2, 0.1, 0.3},
                                                TomographicPoint{0.05, 0.0, 0.1}},
                                     std::tuple{TomographicPoint{0, 1, 0}, TomographicPoint{0, 0, 0},
                                                TomographicPoint{0.25, 0, 0.5}}}) {
      const KernelValue oracle = kernel_compose(q, q, q, x1, x2, x3, t);
      CHECK(rel(kernel_quadratic(x1, x2, x3, t), oracle.value) < 1e-2);
      CHECK(oracle.error_estimate < 1e-2 * std::abs(oracle.value));
    }
  }

  TEST_CASE("quadratic kernel is not symmetric") {
    const TestFunction t = delta_smear(0.05);
    const TomographicPoint x1{0, 1, 0}, x2{0, 0, 0}, x3{0.25, 0, 0.5};
    const cplx k12 = kernel_quadratic(x1, x2, x3, t), k21 = kernel_quadratic(x2, x1, x3, t);
    CHECK(std::abs(k12 - k21) > 0.1 * std::max(std::abs(k12), std::abs(k21)));
  }

  TEST_CASE("twist factor relates quantum and classical kernels") {
    const SchemeKernel s{SchemeSpec::symplectic(), 1.0};
    const TestFunction t = plane_test();
    const KernelValue qu = kernel_compose(s, s, s, kX1, kX2, kX3, t);
    const KernelValue cl = classical_compose(s, s, s, kX1, kX2, kX3, t, true);
    CHECK(rel(qu.value, cl.value) < 1e-2);
    CHECK(std::abs(std::abs(qu.value) - std::abs(cl.value)) < 1e-10 * std::abs(cl.value));
    CHECK(std::abs(std::abs(twist_apply(1.0, 0.3, -1.2, 2.0, 0.7)) - 1.0) < 1e-15);
    CHECK(std::abs(twist_apply(1.0, 1.0, 0.0, 0.0, 1.0) - std::exp(-0.5 * kI)) < 1e-15);
  }

  TEST_CASE("plane-wave kernels need (mu1, nu1) smearing") {
    const SchemeKernel s{SchemeSpec::symplectic(), 1.0};
    try {
      kernel_compose(s, s, s, kX1, kX2, kX3, delta_smear(0.1));
      FAIL("expected UnsmearedKernel");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnsmearedKernel);
    }
  }

  TEST_CASE("thick kernel is the window average of the ideal kernel") {
    const TestFunction t = plane_test();
    for (const auto& xi : {WindowFunction::rectangular(2.0), WindowFunction::gaussian(0.5)}) {
      const SchemeKernel th{SchemeSpec::thick(xi), 1.0};
      const cplx oracle = kernel_compose(th, th, th, kX1, kX2, kX3, t).value;
      const KernelEvaluator ideal(SchemeSpec::symplectic(), KernelMode::Oracle);
      CHECK(rel(kernel_thick(ideal, xi, kX1, kX2, kX3, t).value, oracle) < 1e-2);
      const KernelEvaluator closed(SchemeSpec::thick(xi), KernelMode::ClosedForm);
      CHECK(rel(closed(kX1, kX2, kX3, t).value, oracle) < 1e-2);
    }
  }

  TEST_CASE("evaluator modes agree and batch equals pointwise") {
    const TestFunction t = plane_test();
    const KernelEvaluator oracle(SchemeSpec::symplectic(), KernelMode::Oracle);
    const KernelEvaluator closed(SchemeSpec::symplectic(), KernelMode::ClosedForm);
    CHECK(rel(closed(kX1, kX2, kX3, t).value, oracle(kX1, kX2, kX3, t).value) < 1e-2);
    const std::vector<double> centres{0.1, 0.3, 0.6};
    const auto many = closed.batch(kX1, kX2, kX3.mu, kX3.nu, centres, t);
    REQUIRE(many.size() == 3);
    for (std::size_t i = 0; i < centres.size(); ++i)
      CHECK(rel(many[i].value, closed(kX1, kX2, {centres[i], kX3.mu, kX3.nu}, t).value) < 1e-12);
  }

  TEST_CASE("thick evaluator needs a window") {
    SchemeSpec bare;
    bare.scheme = Scheme::Thick;
    CHECK_THROWS_AS(KernelEvaluator(bare, KernelMode::ClosedForm), Error);
  }
}
