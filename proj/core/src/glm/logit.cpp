#include "favfa/glm/logit.hpp"

#include <cmath>
#include <numbers>

#include "favfa/error.hpp"

namespace favfa::glm {
namespace {

double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

Eigen::MatrixXd information(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd xw = x.array().colwise() * w.array();
  return x.transpose() * xw;
}

Eigen::LDLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& h) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 1e-12)) {
    throw Error(ErrorCode::kSingularInformation,
                "weighted normal equations are rank-deficient (collinear design columns?)");
  }
  return ldlt;
}

}  // namespace

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - softplus(eta(i));
  return ll;
}

Eigen::VectorXd fitted_probabilities(const LogitFit& fit, const Eigen::MatrixXd& x) {
  return (x * fit.beta).unaryExpr([](double e) { return sigmoid(e); });
}

double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

LogitFit fit_logit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   std::vector<std::string> labels, const FitOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (y.size() != n) throw Error(ErrorCode::kPreconditionViolation, "response length mismatch");
  if (n <= p) {
    throw Error(ErrorCode::kPreconditionViolation,
                "logit fit needs more rows than columns (" + std::to_string(n) + " <= " +
                    std::to_string(p) + ")");
  }
  const double positives = y.sum();
  if (positives <= 0.0 || positives >= static_cast<double>(n)) {
    throw Error(ErrorCode::kPreconditionViolation, "logit response must contain both classes");
  }

  LogitFit fit;
  fit.labels = std::move(labels);
  fit.beta = Eigen::VectorXd::Zero(p);
  double ll = log_likelihood(x, y, fit.beta);
  fit.log_likelihood_trace.push_back(ll);
  std::vector<double> norms{0.0};
  const double step_tol = std::sqrt(options.tol);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd prob = fitted_probabilities(fit, x);
    const Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
    const Eigen::VectorXd grad = x.transpose() * (y - prob);
    const auto ldlt = factorize(information(x, w));
    const Eigen::VectorXd delta = ldlt.solve(grad);
    fit.gradient_max_norm = grad.cwiseAbs().maxCoeff();
    if (fit.gradient_max_norm < options.tol && delta.cwiseAbs().maxCoeff() < step_tol) {
      fit.converged = true;
      break;
    }

    double step = 1.0;
    Eigen::VectorXd candidate;
    double ll_candidate = 0.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving) {
      candidate = fit.beta + step * delta;
      ll_candidate = log_likelihood(x, y, candidate);
      if (ll_candidate >= ll - 1e-10 * (1.0 + std::abs(ll))) {
        improved = true;
        break;
      }
      step /= 2.0;
    }
    if (!improved) break;
    if (candidate.cwiseAbs().maxCoeff() > options.separation_bound) {
      throw Error(ErrorCode::kQuasiSeparation,
                  "a coefficient exceeded " + std::to_string(options.separation_bound) +
                      " in magnitude; the maximum likelihood estimate does not exist");
    }
    fit.beta = candidate;
    ll = ll_candidate;
    fit.log_likelihood_trace.push_back(ll);
    norms.push_back(fit.beta.norm());
    ++fit.iterations;
  }

  if (!fit.converged && fit.iterations >= options.max_iter && norms.size() >= 3) {
    const std::size_t k = norms.size();
    if (norms[k - 1] > norms[k - 2] && norms[k - 2] > norms[k - 3]) {
      throw Error(ErrorCode::kQuasiSeparation,
                  "iteration limit reached with a growing coefficient norm");
    }
  }

  const Eigen::VectorXd prob = fitted_probabilities(fit, x);
  const Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
  const auto ldlt = factorize(information(x, w));
  const Eigen::VectorXd grad = x.transpose() * (y - prob);
  fit.gradient_max_norm = grad.cwiseAbs().maxCoeff();
  if (!fit.converged && fit.gradient_max_norm < options.tol &&
      ldlt.solve(grad).cwiseAbs().maxCoeff() < step_tol) {
    fit.converged = true;
  }
  fit.covariance = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  fit.covariance = (fit.covariance + fit.covariance.transpose()) / 2.0;
  fit.log_likelihood = ll;
  return fit;
}

LogitFit fit_logit(const DesignMatrix& design, const FitOptions& options) {
  return fit_logit(design.x, design.y, design.labels, options);
}

std::vector<CoefficientRow> coefficient_table(const LogitFit& fit) {
  std::vector<CoefficientRow> rows;
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    CoefficientRow r;
    r.term = fit.labels.at(static_cast<std::size_t>(j));
    r.estimate = fit.beta(j);
    r.std_error = std::sqrt(std::max(0.0, fit.covariance(j, j)));
    r.z = r.std_error > 0.0 ? r.estimate / r.std_error : 0.0;
    r.p_value = normal_two_sided_p(r.z);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace favfa::glm
