#include "favfa/metrics/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "favfa/error.hpp"
#include "favfa/metrics/threshold.hpp"

namespace favfa::metrics {
namespace {

void finalize(GroupStats& g) {
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  g.tmr = ratio(g.tp, g.n_pos);
  g.fmr = ratio(g.fp, g.n_neg);
  g.accuracy = ratio(g.tp + g.tn, g.size());
  g.selection_rate = ratio(g.tp + g.fp, g.size());
}

void require_groups(std::span<const GroupStats> groups, const char* what) {
  if (groups.empty()) {
    throw Error(ErrorCode::kNoGroups, std::string(what) + " needs at least one group");
  }
}

RateSpread spread(const std::vector<double>& rates) {
  if (rates.empty()) return {};
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  RateSpread s;
  s.difference = *hi - *lo;
  s.ratio = *hi == 0.0 ? 1.0 : *lo / *hi;
  return s;
}

}  // namespace

std::string GroupKey::label() const {
  std::string out;
  for (const auto& [attr, level] : parts) {
    if (!out.empty()) out += '|';
    out += attr + "=" + level;
  }
  return out;
}

GroupConfusion group_confusion(std::span<const data::PairRecord> pairs,
                               std::span<const data::PairCovariates> covariates,
                               std::span<const data::GroundTruth> predicted,
                               std::span<const std::string> grouping, std::size_t min_support) {
  if (pairs.size() != covariates.size() || pairs.size() != predicted.size()) {
    throw Error(ErrorCode::kPreconditionViolation,
                "pairs, covariates and predictions must have equal length");
  }
  std::map<GroupKey, GroupStats> tally;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    GroupKey key;
    key.parts.reserve(grouping.size());
    for (const std::string& attr : grouping) {
      auto it = covariates[i].categorical.find(attr);
      if (it == covariates[i].categorical.end()) {
        throw Error(ErrorCode::kPreconditionViolation,
                    "grouping attribute '" + attr + "' is not a categorical covariate");
      }
      key.parts.emplace_back(attr, it->second);
    }
    GroupStats& g = tally[key];
    const bool accept = predicted[i] == data::GroundTruth::kSame;
    if (pairs[i].positive()) {
      ++g.n_pos;
      ++(accept ? g.tp : g.fn);
    } else {
      ++g.n_neg;
      ++(accept ? g.fp : g.tn);
    }
  }
  GroupConfusion out;
  for (auto& [key, stats] : tally) {
    stats.group = key;
    finalize(stats);
    (stats.size() >= min_support ? out.groups : out.excluded).push_back(std::move(stats));
  }
  return out;
}

GroupConfusion group_confusion(std::span<const data::PairRecord> pairs,
                               std::span<const data::PairCovariates> covariates, double threshold,
                               std::span<const std::string> grouping, std::size_t min_support) {
  const auto predicted = resolve_predictions(pairs, threshold);
  return group_confusion(pairs, covariates, predicted, grouping, min_support);
}

double degree_of_bias(std::span<const GroupStats> groups) {
  require_groups(groups, "degree of bias");
  const double k = static_cast<double>(groups.size());
  double mean = 0.0;
  for (const auto& g : groups) mean += g.accuracy;
  mean /= k;
  double ss = 0.0;
  for (const auto& g : groups) ss += (g.accuracy - mean) * (g.accuracy - mean);
  return std::sqrt(ss / k);
}

RateSpread demographic_parity(std::span<const GroupStats> groups) {
  require_groups(groups, "demographic parity");
  std::vector<double> rates;
  for (const auto& g : groups) rates.push_back(g.selection_rate);
  return spread(rates);
}

RateSpread equalized_odds(std::span<const GroupStats> groups) {
  require_groups(groups, "equalized odds");
  std::vector<double> tmrs;
  std::vector<double> fmrs;
  for (const auto& g : groups) {
    if (g.has_tmr()) tmrs.push_back(g.tmr);
    if (g.has_fmr()) fmrs.push_back(g.fmr);
  }
  const RateSpread t = spread(tmrs);
  const RateSpread f = spread(fmrs);
  return {std::max(t.difference, f.difference), std::min(t.ratio, f.ratio)};
}

double micro_average_accuracy(std::span<const GroupStats> groups) {
  require_groups(groups, "micro-average accuracy");
  double sum = 0.0;
  for (const auto& g : groups) sum += g.accuracy;
  return sum / static_cast<double>(groups.size());
}

FairnessReport fairness_report(const GroupConfusion& confusion, double threshold) {
  if (confusion.groups.empty()) {
    throw Error(ErrorCode::kNoGroups, "no group reaches the minimum support");
  }
  FairnessReport r;
  r.threshold = threshold;
  r.per_group = confusion.groups;
  r.excluded_groups = confusion.excluded;
  r.dob = degree_of_bias(r.per_group);
  const RateSpread dp = demographic_parity(r.per_group);
  r.dpd = dp.difference;
  r.dpr = dp.ratio;
  const RateSpread eo = equalized_odds(r.per_group);
  r.eod = eo.difference;
  r.eor = eo.ratio;
  r.micro_accuracy = micro_average_accuracy(r.per_group);
  return r;
}

}  // namespace favfa::metrics
