#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "favfa/glm/design.hpp"

namespace favfa::glm {

struct FitOptions {
  int max_iter = 50;
  double tol = 1e-8;
  /// Any |beta_j| beyond this during iteration is reported as separation.
  double separation_bound = 30.0;
};

struct LogitFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;  // inverse observed information
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_max_norm = 0.0;
  std::vector<double> log_likelihood_trace;  // one entry per accepted iterate
  std::vector<std::string> labels;
};

/// Maximum likelihood by Newton-Raphson / IRLS with step halving.
///
/// Converged when max |X'(y - p)| < tol and the Newton step is below
/// sqrt(tol); the second condition keeps separated data (where the
/// gradient vanishes while beta drifts to infinity) from being reported as
/// a fit. Throws QuasiSeparation, SingularInformation, PreconditionViolation.
LogitFit fit_logit(const DesignMatrix& design, const FitOptions& options = {});
LogitFit fit_logit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   std::vector<std::string> labels, const FitOptions& options = {});

double sigmoid(double eta);
double log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& beta);
Eigen::VectorXd fitted_probabilities(const LogitFit& fit, const Eigen::MatrixXd& x);

/// Two-sided p-value of a standard normal statistic.
double normal_two_sided_p(double z);

struct CoefficientRow {
  std::string term;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p_value = 1.0;
};

std::vector<CoefficientRow> coefficient_table(const LogitFit& fit);

}  // namespace favfa::glm
