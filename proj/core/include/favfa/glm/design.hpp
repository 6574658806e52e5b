#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "favfa/data/covariates.hpp"
#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::glm {

/// Positives feed the TMR model P(accept | same), negatives the FMR model
/// P(accept | different).
enum class Subset { kPositives, kNegatives };

std::string_view to_string(Subset subset);

struct ColumnInfo {
  enum class Kind { kIntercept, kDummy, kContinuous };
  Kind kind = Kind::kIntercept;
  std::string attribute;
  std::string level;    // dummy columns only
  double center = 0.0;  // continuous: column = (value - center) / scale
  double scale = 1.0;
};

struct DesignMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<ColumnInfo> columns;
  std::vector<std::string> labels;
  std::vector<std::string> row_ids;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
  std::optional<std::size_t> column_of(std::string_view attribute,
                                       std::string_view level = {}) const;
  /// Dummy column indices belonging to a categorical attribute.
  std::vector<std::size_t> dummy_columns(std::string_view attribute) const;
};

struct DesignOptions {
  /// Continuous columns are z-scored; the constants are kept in ColumnInfo.
  bool standardize = true;
};

/// Dummy coding against each categorical reference level (the "Cross"
/// level, when observed, gets its own column), one column per continuous
/// attribute. Throws EmptySubset, ConstantColumn(label).
DesignMatrix build_design(std::span<const data::PairCovariates> covariates,
                          std::span<const double> response, const data::AttributeSchema& schema,
                          const DesignOptions& options = {});

/// Filters to one ground-truth subset; response = 1 iff predicted Same.
DesignMatrix build_design(std::span<const data::PairRecord> pairs,
                          std::span<const data::PairCovariates> covariates,
                          std::span<const data::GroundTruth> predicted,
                          const data::AttributeSchema& schema, Subset subset,
                          const DesignOptions& options = {});

}  // namespace favfa::glm
