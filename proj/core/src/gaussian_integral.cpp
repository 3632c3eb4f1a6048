#include <Eigen/Eigenvalues>

#include "tomo/errors.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

cplx gaussian_integral(const GaussianForm& form) {
  const auto d = form.a.rows();
  if (form.a.cols() != d || form.b.size() != d) {
    throw Error(ErrorKind::BadInput, "Gaussian form dimensions disagree");
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(form.a, /*computeEigenvectors=*/false);
  cplx log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const cplx lambda = eig.eigenvalues()(i);
    if (std::abs(lambda) < 1e-300) {
      throw Error(ErrorKind::NonConvergent, "Gaussian form is singular");
    }
    log_det += std::log(lambda);
  }
  const Eigen::VectorXcd x = form.a.partialPivLu().solve(form.b);
  const cplx quad = 0.5 * form.b.transpose() * x;
  return std::exp(0.5 * static_cast<double>(d) * std::log(2.0 * kPi) - 0.5 * log_det + quad +
                  form.log_c);
}

}  // namespace tomo
