#include "favfa/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "favfa/data/csv.hpp"
#include "favfa/data/io.hpp"
#include "favfa/error.hpp"
#include "favfa/random.hpp"

namespace favfa::sim {
namespace {

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, i);
  return buf;
}

struct Identity {
  std::string id;
  std::string ethnicity;
  std::string gender;
  std::vector<std::size_t> images;  // rows in the image vector
};

}  // namespace

SimulatedDataset simulate_verification(const SimulationConfig& config) {
  if (config.identities < 16 || config.images_per_identity < 2 || config.pairs < 2) {
    throw Error(ErrorCode::kPreconditionViolation,
                "simulation needs >= 16 identities, >= 2 images each, >= 2 pairs");
  }
  const data::AttributeSchema schema = data::default_schema();
  const auto& eth_levels = schema.at("ethnicity").categorical().levels;
  const auto& gender_levels = schema.at("gender").categorical().levels;

  Rng rng(derive_seed(config.seed, "simulator"));
  std::vector<Identity> identities;
  std::vector<data::ImageRecord> images;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_segment;

  for (std::size_t k = 0; k < config.identities; ++k) {
    Identity ident;
    ident.id = numbered("id", k, 5);
    ident.ethnicity = eth_levels[k % eth_levels.size()];
    ident.gender = gender_levels[(k / eth_levels.size()) % gender_levels.size()];
    const double base_age = 18.0 + 52.0 * rng.uniform();
    for (std::size_t m = 0; m < config.images_per_identity; ++m) {
      data::ImageRecord rec;
      rec.image_id = ident.id + "_" + std::to_string(m);
      rec.identity_id = ident.id;
      rec.values["age"] = std::clamp(base_age + 2.0 * rng.normal(), 0.0, 100.0);
      const double pitch = 8.0 * rng.normal();
      const double yaw = 25.0 * rng.normal();
      const double roll = 6.0 * rng.normal();
      rec.values["pose"] = std::sqrt(pitch * pitch + yaw * yaw + roll * roll);
      for (const auto& [attr, truth] : {std::pair<std::string, std::string>{"ethnicity", ident.ethnicity},
                                        std::pair<std::string, std::string>{"gender", ident.gender}}) {
        if (!config.soft_scores) {
          rec.values[attr] = truth;
          continue;
        }
        // The true level keeps weight >= 1 against noise <= 0.5 per level,
        // so the argmax (and the identity average) recovers it.
        const auto& levels = schema.at(attr).categorical().levels;
        std::vector<double> scores;
        double total = 0.0;
        for (const auto& level : levels) {
          const double s = 0.5 * rng.uniform() + (level == truth ? 1.0 : 0.0);
          scores.push_back(s);
          total += s;
        }
        for (double& s : scores) s /= total;
        rec.soft_scores[attr] = std::move(scores);
      }
      ident.images.push_back(images.size());
      images.push_back(std::move(rec));
    }
    by_segment[{ident.ethnicity, ident.gender}].push_back(identities.size());
    identities.push_back(std::move(ident));
  }

  const double tau = config.reference_threshold;
  const double sd = config.noise_sd;
  const double pos_mean = tau - sd * normal_quantile(config.base_tmr);
  const auto neg_mean = [&](const Identity& ident) {
    double fmr = config.base_fmr;
    const std::string& level = config.biased_attribute == "gender" ? ident.gender : ident.ethnicity;
    if (level == config.biased_level) fmr += config.fmr_bias;
    if (ident.gender == "Female") fmr += config.female_fmr_shift;
    fmr = std::clamp(fmr, 1e-6, 1.0 - 1e-6);
    return tau + sd * normal_quantile(1.0 - fmr);
  };
  const auto value = [&](std::size_t row, const char* attr) {
    return std::get<double>(images[row].values.at(attr));
  };

  std::vector<data::PairRecord> pairs;
  pairs.reserve(config.pairs);
  const auto n_pos = static_cast<std::size_t>(
      std::llround(config.positive_fraction * static_cast<double>(config.pairs)));
  for (std::size_t i = 0; i < config.pairs; ++i) {
    data::PairRecord p;
    p.pair_id = numbered("p", i, 6);
    const Identity& a = identities[rng.below(identities.size())];
    const std::size_t ia = a.images[rng.below(a.images.size())];
    if (i < n_pos) {
      std::size_t ib = ia;
      while (ib == ia) ib = a.images[rng.below(a.images.size())];
      const double age = (value(ia, "age") + value(ib, "age")) / 2.0;
      const double pose = (value(ia, "pose") + value(ib, "pose")) / 2.0;
      const double mean =
          pos_mean + config.age_effect * (age - 40.0) / 10.0 + config.pose_effect * (pose - 20.0) / 10.0;
      p.image_a = images[ia].image_id;
      p.image_b = images[ib].image_id;
      p.ground_truth = data::GroundTruth::kSame;
      p.distance = std::max(0.0, mean + sd * rng.normal());
    } else {
      const auto& peers = by_segment.at({a.ethnicity, a.gender});
      const Identity* b = &a;
      while (b == &a) b = &identities[peers[rng.below(peers.size())]];
      const std::size_t ib = b->images[rng.below(b->images.size())];
      p.image_a = images[ia].image_id;
      p.image_b = images[ib].image_id;
      p.ground_truth = data::GroundTruth::kDifferent;
      p.distance = std::max(0.0, neg_mean(a) + sd * rng.normal());
    }
    pairs.push_back(std::move(p));
  }
  return {schema, data::ImageTable(std::move(images)), std::move(pairs)};
}

PlannerPools simulate_planner_pools(const data::AttributeSchema& schema,
                                    std::size_t ids_per_cell, std::size_t styles_per_segment,
                                    std::uint64_t seed) {
  const balance::PlannerConfig config;
  const auto& genders = schema.at(config.segment_attributes[0]).categorical().levels;
  const auto& eths = schema.at(config.segment_attributes[1]).categorical().levels;
  const auto& age_def = schema.at(config.age_attribute);
  const auto& pose_def = schema.at(config.pose_attribute);

  Rng rng(derive_seed(seed, "planner-pools"));
  PlannerPools pools;
  std::size_t id_counter = 0;
  std::size_t style_counter = 0;
  for (const auto& g : genders) {
    for (const auto& e : eths) {
      balance::Segment segment{{g, e}};
      for (std::size_t k = 0; k < ids_per_cell; ++k) {
        pools.ids.push_back({numbered("ddpm", id_counter++, 6), segment});
      }
      for (std::size_t k = 0; k < styles_per_segment; ++k) {
        balance::StyleCandidate s;
        s.image_id = numbered("style", style_counter++, 7);
        s.segment = segment;
        s.age_bin = age_def.bin_of(80.0 * rng.uniform());
        s.pose_bin = pose_def.bin_of(std::abs(30.0 * rng.normal()));
        pools.styles.push_back(std::move(s));
      }
    }
  }
  return pools;
}

std::string id_candidates_to_csv(const std::vector<balance::IdCandidate>& ids,
                                 const balance::PlannerConfig& config) {
  std::ostringstream os;
  os << "image_id";
  for (const auto& a : config.segment_attributes) os << ',' << data::csv_escape(a);
  os << '\n';
  for (const auto& id : ids) {
    os << data::csv_escape(id.image_id);
    for (const auto& l : id.segment.levels) os << ',' << data::csv_escape(l);
    os << '\n';
  }
  return os.str();
}

std::string style_pool_to_csv(const std::vector<balance::StyleCandidate>& styles,
                              const balance::PlannerConfig& config) {
  std::ostringstream os;
  os << "image_id";
  for (const auto& a : config.segment_attributes) os << ',' << data::csv_escape(a);
  os << ',' << config.age_attribute << "_bin," << config.pose_attribute << "_bin\n";
  for (const auto& s : styles) {
    os << data::csv_escape(s.image_id);
    for (const auto& l : s.segment.levels) os << ',' << data::csv_escape(l);
    os << ',' << s.age_bin << ',' << s.pose_bin << '\n';
  }
  return os.str();
}

}  // namespace favfa::sim
