#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "favfa/data/covariates.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::metrics {

/// Demographic segment, e.g. {(gender, Female), (ethnicity, Asian)}.
/// Parts follow the grouping attribute order.
struct GroupKey {
  std::vector<std::pair<std::string, std::string>> parts;

  std::string label() const;  // "gender=Female|ethnicity=Asian"
  auto operator<=>(const GroupKey&) const = default;
  bool operator==(const GroupKey&) const = default;
};

struct GroupStats {
  GroupKey group;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double tmr = 0.0;  // meaningful only when n_pos > 0
  double fmr = 0.0;  // meaningful only when n_neg > 0
  double accuracy = 0.0;
  double selection_rate = 0.0;

  std::size_t size() const { return n_pos + n_neg; }
  bool has_tmr() const { return n_pos > 0; }
  bool has_fmr() const { return n_neg > 0; }
};

struct GroupConfusion {
  std::vector<GroupStats> groups;    // support >= min_support, sorted by key
  std::vector<GroupStats> excluded;  // below min_support, sorted by key
};

inline constexpr std::size_t kDefaultMinSupport = 30;

GroupConfusion group_confusion(std::span<const data::PairRecord> pairs,
                               std::span<const data::PairCovariates> covariates,
                               std::span<const data::GroundTruth> predicted,
                               std::span<const std::string> grouping, std::size_t min_support);

/// Same as above with predictions resolved from `threshold`.
GroupConfusion group_confusion(std::span<const data::PairRecord> pairs,
                               std::span<const data::PairCovariates> covariates, double threshold,
                               std::span<const std::string> grouping, std::size_t min_support);

/// Population standard deviation of group accuracies.
double degree_of_bias(std::span<const GroupStats> groups);

struct RateSpread {
  double difference = 0.0;
  double ratio = 1.0;
};

RateSpread demographic_parity(std::span<const GroupStats> groups);
/// Worst case over the TMR and FMR components. A component with a zero
/// maximum contributes ratio 1.
RateSpread equalized_odds(std::span<const GroupStats> groups);
/// Unweighted mean of group accuracies.
double micro_average_accuracy(std::span<const GroupStats> groups);

struct FairnessReport {
  double dob = 0.0;
  double dpd = 0.0;
  double eod = 0.0;
  double dpr = 1.0;
  double eor = 1.0;
  double micro_accuracy = 0.0;
  double threshold = 0.0;
  std::vector<GroupStats> per_group;
  std::vector<GroupStats> excluded_groups;
};

/// Aggregates the included groups. Throws NoGroups when none qualify.
FairnessReport fairness_report(const GroupConfusion& confusion, double threshold);

}  // namespace favfa::metrics
