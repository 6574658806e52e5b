#include "favfa/metrics/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "favfa/error.hpp"

namespace favfa::metrics {

ThresholdResult optimize_threshold(std::span<const double> distances,
                                   std::span<const data::GroundTruth> truth) {
  if (distances.size() != truth.size()) {
    throw Error(ErrorCode::kPreconditionViolation, "distance and label spans differ in length");
  }
  const std::size_t n = distances.size();
  const std::size_t n_pos =
      static_cast<std::size_t>(std::count(truth.begin(), truth.end(), data::GroundTruth::kSame));
  if (n_pos == 0 || n_pos == n) {
    throw Error(ErrorCode::kDegeneratePairs,
                "threshold optimization needs both same and different pairs");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return distances[a] < distances[b];
  });

  // Sweep plateaus: plateau k accepts the k smallest distinct distances.
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t best_correct = n - n_pos;  // accept nothing
  std::size_t best_tp = 0;
  std::size_t best_fp = 0;
  double best_tau = distances[order.front()];

  std::size_t i = 0;
  while (i < n) {
    const double d = distances[order[i]];
    while (i < n && distances[order[i]] == d) {
      (truth[order[i]] == data::GroundTruth::kSame ? tp : fp) += 1;
      ++i;
    }
    const std::size_t correct = tp + (n - n_pos - fp);
    if (correct > best_correct || (correct == best_correct && fp < best_fp)) {
      best_correct = correct;
      best_tp = tp;
      best_fp = fp;
      if (i < n) {
        const double next = distances[order[i]];
        double mid = d + (next - d) / 2.0;
        if (!(mid > d)) mid = next;
        best_tau = mid;
      } else {
        best_tau = std::nextafter(d, std::numeric_limits<double>::infinity());
      }
    }
  }
  return {best_tau, static_cast<double>(best_correct) / static_cast<double>(n), best_tp, best_fp};
}

ThresholdResult optimize_threshold(std::span<const data::PairRecord> pairs) {
  std::vector<double> d;
  std::vector<data::GroundTruth> truth;
  d.reserve(pairs.size());
  truth.reserve(pairs.size());
  for (const auto& p : pairs) {
    d.push_back(p.distance);
    truth.push_back(p.ground_truth);
  }
  return optimize_threshold(d, truth);
}

std::vector<data::GroundTruth> resolve_predictions(std::span<const data::PairRecord> pairs,
                                                   double threshold) {
  std::vector<data::GroundTruth> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.predicted) {
      out.push_back(*p.predicted);
    } else {
      out.push_back(p.distance < threshold ? data::GroundTruth::kSame : data::GroundTruth::kDifferent);
    }
  }
  return out;
}

}  // namespace favfa::metrics
