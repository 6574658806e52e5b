#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "favfa/data/tables.hpp"

namespace favfa::metrics {

struct ThresholdResult {
  double threshold = 0.0;
  double accuracy = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
};

/// Picks tau so that "Same iff distance < tau" maximizes pair accuracy.
///
/// Accuracy is piecewise constant in tau with breakpoints at the distinct
/// distances. Among plateaus reaching the maximum the one with the fewest
/// false matches wins (this pins the confusion counts uniquely), and tau
/// is the midpoint of that plateau. The unbounded plateaus map to the
/// smallest distance (nothing accepted) and to the next double above the
/// largest distance (everything accepted).
///
/// Throws DegeneratePairs unless both labels occur.
ThresholdResult optimize_threshold(std::span<const double> distances,
                                   std::span<const data::GroundTruth> truth);
ThresholdResult optimize_threshold(std::span<const data::PairRecord> pairs);

/// Per-pair prediction: the stored one when present, otherwise Same iff
/// distance < threshold.
std::vector<data::GroundTruth> resolve_predictions(std::span<const data::PairRecord> pairs, double threshold);

}  // namespace favfa::metrics
