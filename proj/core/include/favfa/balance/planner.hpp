#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "favfa/data/schema.hpp"

namespace favfa::balance {

/// Joint level of the segment attributes (default gender x ethnicity).
struct Segment {
  std::vector<std::string> levels;

  std::string label() const;  // "Female/Asian"
  auto operator<=>(const Segment&) const = default;
  bool operator==(const Segment&) const = default;
};

struct IdCandidate {
  std::string image_id;
  Segment segment;
};

struct StyleCandidate {
  std::string image_id;
  Segment segment;
  std::size_t age_bin = 0;
  std::size_t pose_bin = 0;
};

struct StyleAssignment {
  std::string style_image;
  std::size_t age_bin = 0;
  std::size_t pose_bin = 0;
};

struct PlanEntry {
  std::string id_image;
  Segment segment;
  std::vector<StyleAssignment> styles;
};

struct GenerationPlan {
  std::vector<std::string> segment_attributes;
  std::size_t samples_per_identity = 0;
  std::vector<PlanEntry> entries;
};

struct PlannerConfig {
  std::vector<std::string> segment_attributes{"gender", "ethnicity"};
  std::string age_attribute = "age";
  std::string pose_attribute = "pose";
};

/// ID candidates CSV: image_id plus one column per segment attribute.
std::vector<IdCandidate> load_id_candidates(const std::filesystem::path& path,
                                            const data::AttributeSchema& schema,
                                            const PlannerConfig& config = {});

/// Style pool CSV: image_id, segment columns, and either raw values
/// (`age`, `pose`, or pose as `pose_pitch`/`pose_yaw`/`pose_roll`) binned
/// with the schema bins, or precomputed `age_bin`/`pose_bin` columns.
std::vector<StyleCandidate> load_style_pool(const std::filesystem::path& path,
                                            const data::AttributeSchema& schema,
                                            const PlannerConfig& config = {});

/// Draws n_identities / cells IDs per joint segment cell, uniformly without
/// replacement. Output is cell-major (schema level order), then image_id.
/// Throws NotDivisible, InsufficientCandidates.
std::vector<IdCandidate> select_id_pool(std::span<const IdCandidate> candidates,
                                        const data::AttributeSchema& schema,
                                        std::size_t n_identities, std::uint64_t seed,
                                        const PlannerConfig& config = {});

/// Greedy per-identity style assignment. Each step picks, within the
/// identity's segment, the (age_bin, pose_bin) cell with the fewest styles
/// so far among cells with unused candidates; ties go to the lowest cell,
/// then the lowest image_id. Throws InsufficientStyles.
GenerationPlan assign_styles(std::span<const IdCandidate> ids,
                             std::span<const StyleCandidate> pool,
                             std::size_t samples_per_identity, const PlannerConfig& config = {});

/// Normalized-entropy diversity of the plan per attribute: segment
/// attributes over identities, age and pose bins over styles.
std::map<std::string, double> plan_diversity_report(const GenerationPlan& plan,
                                                    const data::AttributeSchema& schema,
                                                    const PlannerConfig& config = {});

}  // namespace favfa::balance
