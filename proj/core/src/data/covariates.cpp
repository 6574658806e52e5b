#include "favfa/data/covariates.hpp"

#include <cmath>

#include "favfa/error.hpp"

namespace favfa::data {

PairCovariates derive_pair_covariates(const PairRecord& pair, const ImageTable& images,
                                      const AttributeSchema& schema) {
  const ImageRecord* a = images.find(pair.image_a);
  const ImageRecord* b = images.find(pair.image_b);
  if (!a || !b) {
    throw Error(ErrorCode::kUnresolvedImage,
                "pair '" + pair.pair_id + "': unknown image '" + (a ? pair.image_b : pair.image_a) + "'");
  }
  PairCovariates out;
  out.pair_id = pair.pair_id;
  for (const AttributeDef& def : schema.attributes()) {
    if (def.is_categorical()) {
      std::string la = a->level(def);
      std::string lb = b->level(def);
      out.categorical.emplace(def.name, la == lb ? std::move(la) : std::string(kCrossLevel));
    } else {
      const double va = a->real(def);
      const double vb = b->real(def);
      const double v = schema.pair_aggregate() == PairAggregate::kMean ? (va + vb) / 2.0
                                                                       : std::abs(va - vb);
      out.continuous.emplace(def.name, v);
    }
  }
  return out;
}

std::vector<PairCovariates> derive_all_covariates(std::span<const PairRecord> pairs,
                                                  const ImageTable& images,
                                                  const AttributeSchema& schema) {
  std::vector<PairCovariates> out;
  out.reserve(pairs.size());
  for (const PairRecord& p : pairs) out.push_back(derive_pair_covariates(p, images, schema));
  return out;
}

}  // namespace favfa::data
