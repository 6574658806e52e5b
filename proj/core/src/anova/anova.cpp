#include "favfa/anova/anova.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "favfa/error.hpp"

namespace favfa::anova {
namespace {

struct Block {
  std::string name;
  std::vector<Eigen::VectorXd> columns;
};

/// Growing orthonormal basis (Gram-Schmidt with one reorthogonalization).
class Basis {
 public:
  explicit Basis(Eigen::Index n) : n_(n) {}

  /// Returns the unit vector added, or nothing when `v` is (numerically)
  /// inside the current span.
  std::optional<Eigen::VectorXd> add(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) return std::nullopt;
    Eigen::VectorXd r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : q_) r -= q.dot(r) * q;
    }
    const double rn = r.norm();
    if (rn <= 1e-9 * norm) return std::nullopt;
    r /= rn;
    q_.push_back(r);
    return r;
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(q_.size()); }
  Eigen::Index n() const { return n_; }
  const std::vector<Eigen::VectorXd>& vectors() const { return q_; }

 private:
  Eigen::Index n_;
  std::vector<Eigen::VectorXd> q_;
};

std::vector<std::string> observed_levels(std::span<const data::PairCovariates> covariates,
                                         const data::AttributeDef& def) {
  std::vector<std::string> candidates = def.categorical().levels;
  candidates.emplace_back(data::kCrossLevel);
  std::vector<std::string> out;
  for (const auto& level : candidates) {
    for (const auto& c : covariates) {
      if (c.categorical.at(def.name) == level) {
        out.push_back(level);
        break;
      }
    }
  }
  return out;
}

Block main_effect(std::span<const data::PairCovariates> covariates,
                  const data::AttributeDef& def) {
  const auto n = static_cast<Eigen::Index>(covariates.size());
  Block block{def.name, {}};
  if (def.is_categorical()) {
    const auto levels = observed_levels(covariates, def);
    for (std::size_t l = 1; l < levels.size(); ++l) {
      Eigen::VectorXd col(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        col(i) = covariates[static_cast<std::size_t>(i)].categorical.at(def.name) == levels[l];
      }
      block.columns.push_back(std::move(col));
    }
  } else {
    Eigen::VectorXd col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      col(i) = covariates[static_cast<std::size_t>(i)].continuous.at(def.name);
    }
    col.array() -= col.mean();
    block.columns.push_back(std::move(col));
  }
  return block;
}

AnovaTable decompose(std::span<const double> response, std::vector<Block> blocks) {
  const auto n = static_cast<Eigen::Index>(response.size());
  AnovaTable table;
  table.n = response.size();

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = response[static_cast<std::size_t>(i)];
  y.array() -= y.mean();
  table.total_ss = y.squaredNorm();

  Basis basis(n);
  basis.add(Eigen::VectorXd::Ones(n));
  Eigen::VectorXd residual = y;
  for (Block& block : blocks) {
    AnovaFactor f;
    f.name = block.name;
    std::size_t dropped = 0;
    for (const auto& col : block.columns) {
      if (auto q = basis.add(col)) {
        const double proj = q->dot(y);
        f.sum_squares += proj * proj;
        residual -= proj * *q;
        ++f.df;
      } else {
        ++dropped;
      }
    }
    if (f.df == 0) {
      table.warnings.push_back("factor '" + f.name +
                               "' adds no rank beyond earlier factors and was dropped");
      continue;
    }
    if (dropped > 0) {
      table.warnings.push_back("factor '" + f.name + "': " + std::to_string(dropped) +
                               " collinear column(s) dropped");
    }
    table.factors.push_back(std::move(f));
  }
  table.residual_ss = residual.squaredNorm();
  table.residual_df = table.n > static_cast<std::size_t>(basis.size())
                          ? table.n - static_cast<std::size_t>(basis.size())
                          : 0;
  double explained = 0.0;
  for (auto& f : table.factors) {
    f.eta_squared = table.total_ss > 0.0 ? f.sum_squares / table.total_ss : 0.0;
    explained += f.eta_squared;
  }
  table.r_squared = explained;
  return table;
}

std::vector<Block> build_blocks(std::span<const data::PairCovariates> covariates,
                                const data::AttributeSchema& schema,
                                const std::vector<std::string>& order, bool interactions) {
  std::vector<Block> blocks;
  for (const std::string& name : order) blocks.push_back(main_effect(covariates, schema.at(name)));
  if (interactions) {
    const std::size_t main = blocks.size();
    for (std::size_t a = 0; a < main; ++a) {
      if (!schema.at(order[a]).is_categorical()) continue;
      for (std::size_t b = a + 1; b < main; ++b) {
        if (!schema.at(order[b]).is_categorical()) continue;
        Block inter{order[a] + ":" + order[b], {}};
        for (const auto& ca : blocks[a].columns) {
          for (const auto& cb : blocks[b].columns) {
            inter.columns.push_back(ca.cwiseProduct(cb));
          }
        }
        blocks.push_back(std::move(inter));
      }
    }
  }
  return blocks;
}

std::vector<std::string> resolve_order(const data::AttributeSchema& schema,
                                       const std::vector<std::string>& requested) {
  std::vector<std::string> order = requested.empty() ? schema.names() : requested;
  for (std::size_t i = 0; i < order.size(); ++i) {
    schema.at(order[i]);
    if (std::find(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i), order[i]) !=
        order.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw Error(ErrorCode::kPreconditionViolation,
                  "factor '" + order[i] + "' listed twice in the factor order");
    }
  }
  return order;
}

}  // namespace

AnovaTable anova(std::span<const data::PairCovariates> covariates,
                 std::span<const double> response, const data::AttributeSchema& schema,
                 const AnovaOptions& options) {
  if (covariates.empty()) throw Error(ErrorCode::kEmptySubset, "ANOVA subset is empty");
  if (covariates.size() != response.size()) {
    throw Error(ErrorCode::kPreconditionViolation, "covariates and response differ in length");
  }
  for (double v : response) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kPreconditionViolation, "non-finite response");
  }
  const auto order = resolve_order(schema, options.factor_order);
  return decompose(response, build_blocks(covariates, schema, order, options.interactions));
}

AnovaTable anova_distances(std::span<const data::PairRecord> pairs,
                           std::span<const data::PairCovariates> covariates,
                           const data::AttributeSchema& schema, glm::Subset subset,
                           const AnovaOptions& options) {
  if (pairs.size() != covariates.size()) {
    throw Error(ErrorCode::kPreconditionViolation, "pairs and covariates differ in length");
  }
  std::vector<data::PairCovariates> rows;
  std::vector<double> distances;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].positive() != (subset == glm::Subset::kPositives)) continue;
    rows.push_back(covariates[i]);
    distances.push_back(pairs[i].distance);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptySubset,
                "no " + std::string(glm::to_string(subset)) + " pairs for ANOVA");
  }
  AnovaTable table = anova(rows, distances, schema, options);
  table.subset = subset;
  return table;
}

std::vector<EtaRange> eta_squared_order_ranges(std::span<const data::PairCovariates> covariates,
                                               std::span<const double> response,
                                               const data::AttributeSchema& schema,
                                               std::vector<std::string> factors) {
  factors = resolve_order(schema, factors);
  std::vector<EtaRange> ranges;
  for (const auto& f : factors) ranges.push_back({f, 1.0, 0.0});
  std::vector<std::size_t> perm(factors.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    AnovaOptions options;
    for (std::size_t i : perm) options.factor_order.push_back(factors[i]);
    const AnovaTable t = anova(covariates, response, schema, options);
    for (auto& r : ranges) {
      double eta = 0.0;
      for (const auto& f : t.factors) {
        if (f.name == r.name) eta = f.eta_squared;
      }
      r.min = std::min(r.min, eta);
      r.max = std::max(r.max, eta);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ranges;
}

}  // namespace favfa::anova
