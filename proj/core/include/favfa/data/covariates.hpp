#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::data {

struct PairCovariates {
  std::string pair_id;
  std::map<std::string, std::string, std::less<>> categorical;
  std::map<std::string, double, std::less<>> continuous;
};

/// Categorical: shared level, or kCrossLevel when the sides differ.
/// Continuous: mean (or absolute difference) of the two image values.
PairCovariates derive_pair_covariates(const PairRecord& pair, const ImageTable& images,
                                      const AttributeSchema& schema);

std::vector<PairCovariates> derive_all_covariates(std::span<const PairRecord> pairs,
                                                  const ImageTable& images,
                                                  const AttributeSchema& schema);

}  // namespace favfa::data
