#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::balance {

struct ImageWeight {
  std::string image_id;
  double weight = 0.0;
  double probability = 0.0;
};

struct SamplingWeights {
  std::vector<std::string> attributes;
  std::vector<ImageWeight> entries;  // image table order
};

/// Inverse-frequency weights: w_i = prod_a 1 / count(value_a(i)), and
/// p_i = w_i / sum_k w_k. Continuous attributes are keyed by bin and must
/// declare bins. Throws MissingAttribute, PreconditionViolation.
SamplingWeights sampling_weights(const data::ImageTable& images,
                                 const data::AttributeSchema& schema,
                                 std::span<const std::string> attributes);

/// The sampling weights of the batch images divided by their batch sum.
/// Throws PreconditionViolation on an empty batch or unknown image.
std::vector<double> loss_weights(const data::ImageTable& images,
                                 const data::AttributeSchema& schema,
                                 std::span<const std::string> attributes,
                                 std::span<const std::string> batch);

/// n draws with replacement from the sampling distribution.
std::vector<std::string> resample_epoch(const SamplingWeights& weights, std::size_t n,
                                        std::uint64_t seed);

}  // namespace favfa::balance
