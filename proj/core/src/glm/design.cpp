#include "favfa/glm/design.hpp"

#include <cmath>

#include "favfa/error.hpp"

namespace favfa::glm {

std::string_view to_string(Subset subset) {
  return subset == Subset::kPositives ? "positives" : "negatives";
}

std::optional<std::size_t> DesignMatrix::column_of(std::string_view attribute,
                                                   std::string_view level) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].attribute == attribute && columns[j].level == level) return j;
  }
  return std::nullopt;
}

std::vector<std::size_t> DesignMatrix::dummy_columns(std::string_view attribute) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].kind == ColumnInfo::Kind::kDummy && columns[j].attribute == attribute) {
      out.push_back(j);
    }
  }
  return out;
}

DesignMatrix build_design(std::span<const data::PairCovariates> covariates,
                          std::span<const double> response, const data::AttributeSchema& schema,
                          const DesignOptions& options) {
  if (covariates.empty()) throw Error(ErrorCode::kEmptySubset, "design subset is empty");
  if (covariates.size() != response.size()) {
    throw Error(ErrorCode::kPreconditionViolation, "covariates and response differ in length");
  }
  const auto n = static_cast<Eigen::Index>(covariates.size());

  DesignMatrix d;
  d.columns.push_back({ColumnInfo::Kind::kIntercept, "", "", 0.0, 1.0});
  d.labels.push_back("(Intercept)");
  for (const data::AttributeDef& def : schema.attributes()) {
    if (def.is_categorical()) {
      const auto& cat = def.categorical();
      for (const std::string& level : cat.levels) {
        if (level == cat.reference) continue;
        d.columns.push_back({ColumnInfo::Kind::kDummy, def.name, level, 0.0, 1.0});
        d.labels.push_back(def.name + "=" + level);
      }
      bool has_cross = false;
      for (const auto& c : covariates) {
        if (c.categorical.at(def.name) == data::kCrossLevel) {
          has_cross = true;
          break;
        }
      }
      if (has_cross) {
        d.columns.push_back(
            {ColumnInfo::Kind::kDummy, def.name, std::string(data::kCrossLevel), 0.0, 1.0});
        d.labels.push_back(def.name + "=" + std::string(data::kCrossLevel));
      }
    } else {
      d.columns.push_back({ColumnInfo::Kind::kContinuous, def.name, "", 0.0, 1.0});
      d.labels.push_back(def.name);
    }
  }

  const auto p = static_cast<Eigen::Index>(d.columns.size());
  d.x = Eigen::MatrixXd::Zero(n, p);
  d.y.resize(n);
  d.row_ids.reserve(covariates.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const data::PairCovariates& c = covariates[static_cast<std::size_t>(i)];
    d.row_ids.push_back(c.pair_id);
    d.y(i) = response[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) {
      const ColumnInfo& col = d.columns[static_cast<std::size_t>(j)];
      switch (col.kind) {
        case ColumnInfo::Kind::kIntercept:
          d.x(i, j) = 1.0;
          break;
        case ColumnInfo::Kind::kDummy: {
          auto it = c.categorical.find(col.attribute);
          if (it == c.categorical.end()) {
            throw Error(ErrorCode::kMissingAttribute,
                        "pair '" + c.pair_id + "' lacks covariate '" + col.attribute + "'");
          }
          d.x(i, j) = it->second == col.level ? 1.0 : 0.0;
          break;
        }
        case ColumnInfo::Kind::kContinuous: {
          auto it = c.continuous.find(col.attribute);
          if (it == c.continuous.end()) {
            throw Error(ErrorCode::kMissingAttribute,
                        "pair '" + c.pair_id + "' lacks covariate '" + col.attribute + "'");
          }
          d.x(i, j) = it->second;
          break;
        }
      }
    }
  }
  // Every categorical level must be known to the schema.
  for (const auto& c : covariates) {
    for (const auto& [attr, level] : c.categorical) {
      const data::AttributeDef* def = schema.find(attr);
      if (def && def->is_categorical() && level != data::kCrossLevel &&
          !def->categorical().index_of(level)) {
        throw Error(ErrorCode::kPreconditionViolation,
                    "pair '" + c.pair_id + "': unknown level '" + level + "' for '" + attr + "'");
      }
    }
  }

  for (Eigen::Index j = 1; j < p; ++j) {
    ColumnInfo& col = d.columns[static_cast<std::size_t>(j)];
    auto column = d.x.col(j);
    const double lo = column.minCoeff();
    const double hi = column.maxCoeff();
    if (lo == hi) {
      throw Error(ErrorCode::kConstantColumn,
                  "design column '" + d.labels[static_cast<std::size_t>(j)] + "' is constant");
    }
    if (col.kind == ColumnInfo::Kind::kContinuous && options.standardize) {
      col.center = column.mean();
      col.scale = std::sqrt((column.array() - col.center).square().mean());
      column = (column.array() - col.center) / col.scale;
    }
  }
  return d;
}

DesignMatrix build_design(std::span<const data::PairRecord> pairs,
                          std::span<const data::PairCovariates> covariates,
                          std::span<const data::GroundTruth> predicted,
                          const data::AttributeSchema& schema, Subset subset,
                          const DesignOptions& options) {
  if (pairs.size() != covariates.size() || pairs.size() != predicted.size()) {
    throw Error(ErrorCode::kPreconditionViolation,
                "pairs, covariates and predictions must have equal length");
  }
  std::vector<data::PairCovariates> rows;
  std::vector<double> response;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].positive() != (subset == Subset::kPositives)) continue;
    rows.push_back(covariates[i]);
    response.push_back(predicted[i] == data::GroundTruth::kSame ? 1.0 : 0.0);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptySubset,
                "no " + std::string(to_string(subset)) + " pairs to build a design from");
  }
  return build_design(rows, response, schema, options);
}

}  // namespace favfa::glm
