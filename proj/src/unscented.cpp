#include "fnav/unscented.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fnav {

Eigen::VectorXd unscented_mean(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                               const UtParams& params) {
  const auto n = mean.size();
  if (covariance.rows() != n || covariance.cols() != n)
    throw std::invalid_argument("covariance dimension mismatch");

  // Zero spread collapses every sigma point onto the mean; return the
  // single evaluation so the result is bit-identical to it.
  if (covariance.isZero(0.0)) return f(mean);

  // LDLT instead of plain Cholesky so semidefinite covariances (some
  // components known exactly) factor cleanly; indefinite ones still fail.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(covariance);
  Eigen::VectorXd d = ldlt.vectorD();
  const double d_tol = 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || d.minCoeff() < -d_tol) {
    std::ostringstream msg;
    msg << "covariance is not positive semidefinite:\n" << covariance;
    throw std::runtime_error(msg.str());
  }
  d = d.cwiseMax(0.0);

  const double nd = static_cast<double>(n);
  const double lambda = params.alpha * params.alpha * (nd + params.kappa) - nd;
  const double scale = std::sqrt(nd + lambda);
  const double w0 = lambda / (nd + lambda);
  const double wi = 1.0 / (2.0 * (nd + lambda));

  const Eigen::MatrixXd root = ldlt.transpositionsP().transpose() *
                               (Eigen::MatrixXd(ldlt.matrixL()) *
                                Eigen::MatrixXd(d.cwiseSqrt().asDiagonal()));
  Eigen::VectorXd out = w0 * f(mean);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd offset = scale * root.col(i);
    out += wi * f(mean + offset);
    out += wi * f(mean - offset);
  }
  return out;
}

}  // namespace fnav
