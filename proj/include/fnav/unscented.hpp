#pragma once

#include <Eigen/Dense>
#include <functional>

namespace fnav {

// Scaled unscented transform parameters (standard alpha/beta/kappa form).
struct UtParams {
  double alpha = 0.1;
  double beta = 2.0;
  double kappa = 0.0;
};

// Propagates (mean, covariance) through f with 2n+1 sigma points and
// returns the weighted output mean. Exactly f(mean) for zero covariance;
// exact for linear f and for quadratics at zero mean by construction.
// Semidefinite covariances are accepted (exactly-known components simply
// get zero spread); an indefinite matrix throws std::runtime_error with
// the offending matrix echoed.
Eigen::VectorXd unscented_mean(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                               const UtParams& params = {});

}  // namespace fnav
