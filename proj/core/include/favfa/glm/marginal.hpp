#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "favfa/data/schema.hpp"
#include "favfa/glm/design.hpp"
#include "favfa/glm/logit.hpp"

namespace favfa::glm {

struct MarginalEffect {
  std::string attribute;
  std::string level;      // categorical: protected level
  std::string reference;  // categorical: reference level
  std::string unit;       // continuous: per-unit effect
  bool continuous = false;
  double estimate = 0.0;  // probability points (0.10 = 10 points)
  double std_error = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  bool significant = false;
  std::optional<double> bootstrap_std_error;
};

/// Average marginal effects with delta-method standard errors.
///
/// Categorical level l of attribute a: mean over rows of
/// sigma(x_i with a := l) - sigma(x_i with a := reference).
/// Continuous attribute: mean derivative of sigma(x_i' beta) with respect
/// to the original (unstandardized) value. Throws NotConverged.
std::vector<MarginalEffect> marginal_effects(const LogitFit& fit, const DesignMatrix& design,
                                             const data::AttributeSchema& schema,
                                             double alpha = 0.05);

struct BootstrapResult {
  std::vector<double> std_errors;  // aligned with marginal_effects()
  std::size_t successful = 0;
  std::size_t failed = 0;          // resamples that could not be fitted
};

/// Nonparametric row bootstrap of the marginal-effect estimates. Each
/// resample b draws from its own stream derive_seed(seed, b).
BootstrapResult bootstrap_marginal_effects(const DesignMatrix& design,
                                           const data::AttributeSchema& schema,
                                           std::size_t resamples, std::uint64_t seed,
                                           const FitOptions& options = {});

enum class Outcome { kTrueMatch, kFalseMatch };

/// One-sentence reading of an effect, e.g. "... two people from the
/// African subgroup are 12 points more likely to be wrongly matched than
/// two people from the Caucasian subgroup."
std::string interpret(const MarginalEffect& effect, Outcome outcome);

}  // namespace favfa::glm
