#include "favfa/balance/weights.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "favfa/error.hpp"
#include "favfa/random.hpp"

namespace favfa::balance {
namespace {

std::string value_key(const data::ImageRecord& rec, const data::AttributeDef& def) {
  if (def.is_categorical()) return rec.level(def);
  if (def.bins.empty()) {
    throw Error(ErrorCode::kPreconditionViolation,
                "continuous attribute '" + def.name + "' must declare bins before weighting");
  }
  return std::to_string(def.bin_of(rec.real(def)));
}

std::vector<double> raw_weights(const data::ImageTable& images,
                                const data::AttributeSchema& schema,
                                std::span<const std::string> attributes) {
  std::vector<double> w(images.size(), 1.0);
  for (const std::string& name : attributes) {
    const data::AttributeDef& def = schema.at(name);
    std::vector<std::string> keys;
    keys.reserve(images.size());
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& rec : images.records()) {
      keys.push_back(value_key(rec, def));
      ++counts[keys.back()];
    }
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= 1.0 / static_cast<double>(counts[keys[i]]);
  }
  return w;
}

/// Sum in ascending order so the total does not depend on row order.
double ordered_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace

SamplingWeights sampling_weights(const data::ImageTable& images,
                                 const data::AttributeSchema& schema,
                                 std::span<const std::string> attributes) {
  const std::vector<double> w = raw_weights(images, schema, attributes);
  SamplingWeights out;
  out.attributes.assign(attributes.begin(), attributes.end());
  if (w.empty()) return out;
  const double total = ordered_sum(w);
  out.entries.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.entries.push_back({images.records()[i].image_id, w[i], w[i] / total});
  }
  return out;
}

std::vector<double> loss_weights(const data::ImageTable& images,
                                 const data::AttributeSchema& schema,
                                 std::span<const std::string> attributes,
                                 std::span<const std::string> batch) {
  if (batch.empty()) throw Error(ErrorCode::kPreconditionViolation, "empty batch");
  const std::vector<double> w = raw_weights(images, schema, attributes);
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < images.size(); ++i) row.emplace(images.records()[i].image_id, i);
  std::vector<double> out;
  out.reserve(batch.size());
  for (const std::string& id : batch) {
    auto it = row.find(id);
    if (it == row.end()) {
      throw Error(ErrorCode::kUnresolvedImage, "batch image '" + id + "' is not in the table");
    }
    out.push_back(w[it->second]);
  }
  const double total = ordered_sum(out);
  for (double& v : out) v /= total;
  return out;
}

std::vector<std::string> resample_epoch(const SamplingWeights& weights, std::size_t n,
                                        std::uint64_t seed) {
  if (weights.entries.empty()) {
    throw Error(ErrorCode::kPreconditionViolation, "cannot resample from an empty table");
  }
  std::vector<double> cumulative;
  cumulative.reserve(weights.entries.size());
  double acc = 0.0;
  for (const auto& e : weights.entries) {
    acc += e.probability;
    cumulative.push_back(acc);
  }
  Rng rng(derive_seed(seed, "resample"));
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    out.push_back(weights.entries[static_cast<std::size_t>(it - cumulative.begin())].image_id);
  }
  return out;
}

}  // namespace favfa::balance
