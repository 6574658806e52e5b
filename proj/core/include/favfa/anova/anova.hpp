#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "favfa/data/covariates.hpp"
#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"
#include "favfa/glm/design.hpp"

namespace favfa::anova {

struct AnovaFactor {
  std::string name;  // attribute, or "a:b" for an interaction
  std::size_t df = 0;
  double sum_squares = 0.0;
  double eta_squared = 0.0;
};

struct AnovaTable {
  glm::Subset subset = glm::Subset::kPositives;
  std::vector<AnovaFactor> factors;  // in entry order
  double residual_ss = 0.0;
  std::size_t residual_df = 0;
  double total_ss = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
  std::vector<std::string> warnings;  // dropped (collinear) factors and columns
};

struct AnovaOptions {
  /// Entry order for the sequential decomposition; empty = schema order.
  std::vector<std::string> factor_order;
  /// Adds pairwise categorical x categorical interaction blocks after the
  /// main effects.
  bool interactions = false;
};

/// Sequential (Type I) decomposition of a least-squares fit of `response`
/// on the covariates. Categorical factors enter as dummies against their
/// first observed level, continuous factors as one column. A column that
/// adds no rank is dropped with a warning; a factor left with no columns
/// is dropped entirely. Throws EmptySubset.
AnovaTable anova(std::span<const data::PairCovariates> covariates,
                 std::span<const double> response, const data::AttributeSchema& schema,
                 const AnovaOptions& options = {});

/// Decomposes the embedding distances of one ground-truth subset.
AnovaTable anova_distances(std::span<const data::PairRecord> pairs,
                           std::span<const data::PairCovariates> covariates,
                           const data::AttributeSchema& schema, glm::Subset subset,
                           const AnovaOptions& options = {});

struct EtaRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

/// Range of each main-effect eta squared over every factor entry order.
std::vector<EtaRange> eta_squared_order_ranges(std::span<const data::PairCovariates> covariates,
                                               std::span<const double> response,
                                               const data::AttributeSchema& schema,
                                               std::vector<std::string> factors);

}  // namespace favfa::anova
