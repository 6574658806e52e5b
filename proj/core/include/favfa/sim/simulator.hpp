#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "favfa/balance/planner.hpp"
#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::sim {

/// Synthetic verification benchmark with a controllable false-match gap.
///
/// Distances are Gaussian around a reference threshold. Negative pairs of
/// the biased level get a false match probability of base_fmr + fmr_bias
/// at that threshold, the others base_fmr. Negatives are drawn within a
/// demographic segment, as in within-ethnicity benchmarks.
struct SimulationConfig {
  std::size_t identities = 400;
  std::size_t images_per_identity = 5;
  std::size_t pairs = 20000;
  double positive_fraction = 0.5;
  std::string biased_attribute = "ethnicity";
  std::string biased_level = "African";
  double fmr_bias = 0.10;
  double base_fmr = 0.10;
  double base_tmr = 0.90;
  double noise_sd = 0.20;
  double reference_threshold = 1.0;
  double female_fmr_shift = 0.0;
  /// Positive-pair distance shift per decade of age above 40.
  double age_effect = 0.0;
  /// Positive-pair distance shift per 10 degrees of pose above 20.
  double pose_effect = 0.0;
  /// Emit noisy soft scores for identity attributes instead of hard labels.
  bool soft_scores = false;
  std::uint64_t seed = 0;
};

struct SimulatedDataset {
  data::AttributeSchema schema;
  data::ImageTable images;
  std::vector<data::PairRecord> pairs;
};

/// Uses data::default_schema().
SimulatedDataset simulate_verification(const SimulationConfig& config);

struct PlannerPools {
  std::vector<balance::IdCandidate> ids;
  std::vector<balance::StyleCandidate> styles;
};

/// Random ID candidates and a style pool covering every segment cell.
PlannerPools simulate_planner_pools(const data::AttributeSchema& schema,
                                    std::size_t ids_per_cell, std::size_t styles_per_segment,
                                    std::uint64_t seed);

std::string id_candidates_to_csv(const std::vector<balance::IdCandidate>& ids,
                                 const balance::PlannerConfig& config = {});
std::string style_pool_to_csv(const std::vector<balance::StyleCandidate>& styles,
                              const balance::PlannerConfig& config = {});

}  // namespace favfa::sim
