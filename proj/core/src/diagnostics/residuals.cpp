#include "favfa/diagnostics/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "favfa/error.hpp"
#include "favfa/parallel.hpp"
#include "favfa/random.hpp"

namespace favfa::diagnostics {
namespace {

double rank_p_value(double observed, const std::vector<double>& simulated) {
  std::size_t le = 0;
  std::size_t ge = 0;
  for (double s : simulated) {
    le += s <= observed ? 1 : 0;
    ge += s >= observed ? 1 : 0;
  }
  const auto m = static_cast<double>(simulated.size());
  return std::min(1.0, 2.0 * std::min(le / m, ge / m));
}

}  // namespace

double ks_uniform_statistic(std::span<const double> sample) {
  std::vector<double> u(sample.begin(), sample.end());
  std::sort(u.begin(), u.end());
  const auto n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::clamp(u[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - v, v - static_cast<double>(i) / n});
  }
  return d;
}

double ks_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ResidualDiagnostics simulate_residuals(const glm::LogitFit& fit, const glm::DesignMatrix& design,
                                       std::size_t n_sim, std::uint64_t seed) {
  if (!fit.converged) throw Error(ErrorCode::kNotConverged, "diagnostics need a converged fit");
  if (n_sim < kMinSimulations) {
    throw Error(ErrorCode::kPreconditionViolation,
                "diagnostics need at least " + std::to_string(kMinSimulations) + " simulations");
  }
  const Eigen::VectorXd prob = glm::fitted_probabilities(fit, design.x);
  const std::size_t n = static_cast<std::size_t>(prob.size());
  const auto nd = static_cast<double>(n);

  std::vector<double> inv_sd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = prob(static_cast<Eigen::Index>(i));
    inv_sd[i] = 1.0 / std::sqrt(std::max(p * (1.0 - p), 1e-300));
  }
  auto pearson_var = [&](auto outcome) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (outcome(i) - prob(static_cast<Eigen::Index>(i))) * inv_sd[i];
      sum += r;
      sum_sq += r * r;
    }
    const double mean = sum / nd;
    return sum_sq / nd - mean * mean;
  };

  // Replicate r occupies row r; one byte per observation.
  std::vector<std::uint8_t> replicates(n_sim * n);
  std::vector<double> sim_dispersion(n_sim);
  std::vector<double> sim_zeros(n_sim);
  parallel_for(n_sim, [&](std::size_t r) {
    Rng rng(derive_seed(derive_seed(seed, "replicate"), static_cast<std::uint64_t>(r)));
    std::uint8_t* row = replicates.data() + r * n;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = rng.bernoulli(prob(static_cast<Eigen::Index>(i))) ? 1 : 0;
      zeros += row[i] == 0 ? 1 : 0;
    }
    sim_zeros[r] = static_cast<double>(zeros);
    sim_dispersion[r] = pearson_var([&](std::size_t i) { return static_cast<double>(row[i]); });
  });

  ResidualDiagnostics out;
  out.n_simulations = n_sim;
  out.seed = seed;
  out.scaled_residuals.resize(n);
  Rng jitter(derive_seed(seed, "randomization"));
  const auto m = static_cast<double>(n_sim);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ones = 0;
    for (std::size_t r = 0; r < n_sim; ++r) ones += replicates[r * n + i];
    const double p_zero = static_cast<double>(n_sim - ones) / m;
    const double p_one = static_cast<double>(ones) / m;
    const double u = jitter.uniform();
    out.scaled_residuals[i] =
        design.y(static_cast<Eigen::Index>(i)) > 0.5 ? p_zero + u * p_one : u * p_zero;
  }
  out.ks_statistic = ks_uniform_statistic(out.scaled_residuals);
  out.ks_p_value = ks_p_value(out.ks_statistic, n);

  const double observed_dispersion =
      pearson_var([&](std::size_t i) { return design.y(static_cast<Eigen::Index>(i)); });
  double mean_dispersion = 0.0;
  for (double v : sim_dispersion) mean_dispersion += v;
  mean_dispersion /= m;
  out.dispersion_ratio = observed_dispersion / mean_dispersion;
  out.dispersion_p = rank_p_value(observed_dispersion, sim_dispersion);

  double observed_zeros = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    observed_zeros += design.y(static_cast<Eigen::Index>(i)) > 0.5 ? 0.0 : 1.0;
  }
  double mean_zeros = 0.0;
  for (double v : sim_zeros) mean_zeros += v;
  mean_zeros /= m;
  out.zero_inflation_ratio = mean_zeros > 0.0 ? observed_zeros / mean_zeros
                                              : (observed_zeros > 0.0 ? HUGE_VAL : 1.0);
  out.zero_inflation_p = rank_p_value(observed_zeros, sim_zeros);
  return out;
}

}  // namespace favfa::diagnostics
