#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::fixture {

inline data::ImageRecord image(std::string id, std::string identity,
                               std::initializer_list<std::pair<const char*, const char*>> levels,
                               std::initializer_list<std::pair<const char*, double>> reals = {}) {
  data::ImageRecord r;
  r.image_id = std::move(id);
  r.identity_id = std::move(identity);
  for (const auto& [k, v] : levels) r.values[k] = std::string(v);
  for (const auto& [k, v] : reals) r.values[k] = v;
  return r;
}

inline data::PairRecord pair(std::string id, std::string a, std::string b, bool same, double distance) {
  data::PairRecord p;
  p.pair_id = std::move(id);
  p.image_a = std::move(a);
  p.image_b = std::move(b);
  p.ground_truth = same ? data::GroundTruth::kSame : data::GroundTruth::kDifferent;
  p.distance = distance;
  return p;
}

inline data::AttributeDef categorical(std::string name, std::vector<std::string> levels,
                                      data::Scope scope = data::Scope::kImage) {
  data::AttributeDef def;
  def.name = std::move(name);
  data::Categorical c;
  c.reference = levels.front();
  c.levels = std::move(levels);
  def.kind = std::move(c);
  def.scope = scope;
  return def;
}

inline data::AttributeDef continuous(std::string name, std::string unit, std::vector<data::Bin> bins = {}) {
  data::AttributeDef def;
  def.name = std::move(name);
  def.kind = data::Continuous{std::move(unit)};
  def.bins = std::move(bins);
  return def;
}

}  // namespace favfa::fixture
