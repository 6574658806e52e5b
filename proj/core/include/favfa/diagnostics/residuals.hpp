#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "favfa/glm/design.hpp"
#include "favfa/glm/logit.hpp"

namespace favfa::diagnostics {

inline constexpr std::size_t kDefaultSimulations = 250;
inline constexpr std::size_t kMinSimulations = 100;

struct ResidualDiagnostics {
  std::vector<double> scaled_residuals;  // randomized quantile residuals in [0, 1]
  double ks_statistic = 0.0;
  double ks_p_value = 1.0;
  double dispersion_ratio = 1.0;
  double dispersion_p = 1.0;
  double zero_inflation_ratio = 1.0;
  double zero_inflation_p = 1.0;
  std::size_t n_simulations = 0;
  std::uint64_t seed = 0;
};

/// Parametric-bootstrap residual checks for a binomial logit fit.
///
/// Replicate outcome vectors are drawn from Bernoulli(sigma(x_i' beta)).
/// Residual u_i = P*(y < y_i) + U * P*(y = y_i) under the replicate
/// distribution, U ~ uniform(0, 1). Dispersion compares the variance of
/// Pearson residuals, zero inflation the count of zeros, each against the
/// replicates with p = min(1, 2 min(P*(T <= t), P*(T >= t))).
///
/// Throws NotConverged, PreconditionViolation (n_sim < 100).
ResidualDiagnostics simulate_residuals(const glm::LogitFit& fit, const glm::DesignMatrix& design,
                                       std::size_t n_sim, std::uint64_t seed);

/// One-sample Kolmogorov-Smirnov statistic against uniform(0, 1).
double ks_uniform_statistic(std::span<const double> sample);
/// Asymptotic Kolmogorov tail probability with the usual small-n
/// correction lambda = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) * D.
double ks_p_value(double statistic, std::size_t n);

}  // namespace favfa::diagnostics
