#include "favfa/data/tables.hpp"

#include <cmath>
#include <numeric>

#include "favfa/error.hpp"

namespace favfa::data {
namespace {

[[noreturn]] void missing(const std::string& image_id, const std::string& attr) {
  throw Error(ErrorCode::kMissingAttribute,
              "image '" + image_id + "' has no value for attribute '" + attr + "'");
}

std::size_t argmax_first(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

struct CategoricalColumns {
  std::optional<std::size_t> hard;
  std::vector<std::size_t> soft;  // one per level, empty when absent
};

struct ContinuousColumns {
  std::optional<std::size_t> value;
  std::vector<std::size_t> components;  // pitch, yaw, roll
};

}  // namespace

std::string ImageRecord::level(const AttributeDef& def) const {
  if (auto it = values.find(def.name); it != values.end()) {
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  }
  if (auto it = soft_scores.find(def.name); it != soft_scores.end()) {
    return def.categorical().levels[argmax_first(it->second)];
  }
  missing(image_id, def.name);
}

double ImageRecord::real(const AttributeDef& def) const {
  if (auto it = values.find(def.name); it != values.end()) {
    if (const auto* v = std::get_if<double>(&it->second)) return *v;
  }
  missing(image_id, def.name);
}

ImageTable::ImageTable(std::vector<ImageRecord> records) : records_(std::move(records)) {
  std::unordered_map<std::string, std::size_t> identity_slot;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const ImageRecord& r = records_[i];
    if (!by_id_.emplace(r.image_id, i).second) {
      throw Error(ErrorCode::kParseError, "duplicate image_id '" + r.image_id + "'");
    }
    auto [it, inserted] = identity_slot.emplace(r.identity_id, identities_.size());
    if (inserted) identities_.push_back({r.identity_id, {}});
    identities_[it->second].second.push_back(i);
  }
}

const ImageRecord* ImageTable::find(std::string_view image_id) const {
  auto it = by_id_.find(std::string(image_id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

GroundTruth parse_ground_truth(std::string_view text) {
  if (text == "same" || text == "Same" || text == "1" || text == "true") return GroundTruth::kSame;
  if (text == "different" || text == "Different" || text == "0" || text == "false") {
    return GroundTruth::kDifferent;
  }
  throw Error(ErrorCode::kParseError,
              "ground truth must be same/different or 1/0, got '" + std::string(text) + "'");
}

ImageTable parse_images(const CsvTable& csv, const AttributeSchema& schema) {
  const std::size_t id_col = csv.require_column("image_id");
  const std::optional<std::size_t> identity_col = csv.column("identity_id");

  std::vector<CategoricalColumns> cat_cols(schema.attributes().size());
  std::vector<ContinuousColumns> cont_cols(schema.attributes().size());
  for (std::size_t a = 0; a < schema.attributes().size(); ++a) {
    const AttributeDef& def = schema.attributes()[a];
    if (def.is_categorical()) {
      cat_cols[a].hard = csv.column(def.name);
      bool any = false;
      std::vector<std::optional<std::size_t>> soft;
      for (const std::string& level : def.categorical().levels) {
        soft.push_back(csv.column(def.name + ":" + level));
        any = any || soft.back().has_value();
      }
      if (any) {
        for (std::size_t l = 0; l < soft.size(); ++l) {
          if (!soft[l]) {
            throw Error(ErrorCode::kParseError,
                        csv.origin() + ": soft-score column '" + def.name + ":" +
                            def.categorical().levels[l] + "' missing");
          }
          cat_cols[a].soft.push_back(*soft[l]);
        }
      }
    } else {
      cont_cols[a].value = csv.column(def.name);
      auto p = csv.column(def.name + "_pitch");
      auto y = csv.column(def.name + "_yaw");
      auto r = csv.column(def.name + "_roll");
      if (p && y && r) cont_cols[a].components = {*p, *y, *r};
    }
  }

  std::vector<ImageRecord> records;
  records.reserve(csv.rows());
  for (std::size_t i = 0; i < csv.rows(); ++i) {
    const auto& row = csv.row(i);
    ImageRecord rec;
    rec.image_id = row[id_col];
    if (rec.image_id.empty()) {
      throw Error(ErrorCode::kParseError,
                  csv.origin() + ": row " + std::to_string(i + 2) + " has an empty image_id");
    }
    rec.identity_id = identity_col && !row[*identity_col].empty() ? row[*identity_col] : rec.image_id;
    const std::string context = csv.origin() + " image '" + rec.image_id + "'";

    for (std::size_t a = 0; a < schema.attributes().size(); ++a) {
      const AttributeDef& def = schema.attributes()[a];
      bool present = false;
      if (def.is_categorical()) {
        const auto& cols = cat_cols[a];
        if (cols.hard && !row[*cols.hard].empty()) {
          const std::string& level = row[*cols.hard];
          if (!def.categorical().index_of(level)) {
            throw Error(ErrorCode::kParseError, context + ": unknown level '" + level +
                                                    "' for attribute '" + def.name + "'");
          }
          rec.values[def.name] = level;
          present = true;
        }
        if (!cols.soft.empty()) {
          std::size_t filled = 0;
          for (std::size_t c : cols.soft) filled += row[c].empty() ? 0 : 1;
          if (filled == cols.soft.size()) {
            std::vector<double> scores;
            for (std::size_t c : cols.soft) {
              const double v = parse_real(row[c], context);
              if (v < 0.0) throw Error(ErrorCode::kParseError, context + ": negative soft score");
              scores.push_back(v);
            }
            const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
            if (std::abs(sum - 1.0) > 1e-6) {
              throw Error(ErrorCode::kParseError,
                          context + ": soft scores for '" + def.name + "' do not sum to 1");
            }
            rec.soft_scores[def.name] = std::move(scores);
            present = true;
          } else if (filled != 0) {
            throw Error(ErrorCode::kParseError,
                        context + ": partially filled soft scores for '" + def.name + "'");
          }
        }
      } else {
        const auto& cols = cont_cols[a];
        if (cols.value && !row[*cols.value].empty()) {
          rec.values[def.name] = parse_real(row[*cols.value], context);
          present = true;
        } else if (!cols.components.empty()) {
          std::size_t filled = 0;
          double sq = 0.0;
          for (std::size_t c : cols.components) {
            if (row[c].empty()) continue;
            const double v = parse_real(row[c], context);
            sq += v * v;
            ++filled;
          }
          if (filled == cols.components.size()) {
            rec.values[def.name] = std::sqrt(sq);
            present = true;
          }
        }
      }
      if (!present) missing(rec.image_id, def.name);
    }
    records.push_back(std::move(rec));
  }
  return ImageTable(std::move(records));
}

ImageTable load_images(const std::filesystem::path& path, const AttributeSchema& schema) {
  return parse_images(CsvTable::read(path), schema);
}

std::vector<PairRecord> parse_pairs(const CsvTable& csv, const ImageTable& images) {
  const std::size_t id_col = csv.require_column("pair_id");
  const std::size_t a_col = csv.require_column("image_a");
  const std::size_t b_col = csv.require_column("image_b");
  const std::size_t truth_col = csv.require_column("ground_truth");
  const std::size_t dist_col = csv.require_column("distance");
  const std::optional<std::size_t> pred_col = csv.column("predicted");

  std::vector<PairRecord> pairs;
  pairs.reserve(csv.rows());
  for (std::size_t i = 0; i < csv.rows(); ++i) {
    const auto& row = csv.row(i);
    PairRecord p;
    p.pair_id = row[id_col];
    p.image_a = row[a_col];
    p.image_b = row[b_col];
    const std::string context = csv.origin() + " pair '" + p.pair_id + "'";
    p.ground_truth = parse_ground_truth(row[truth_col]);
    p.distance = parse_real(row[dist_col], context);
    if (p.distance < 0.0) throw Error(ErrorCode::kParseError, context + ": negative distance");
    if (pred_col && !row[*pred_col].empty()) p.predicted = parse_ground_truth(row[*pred_col]);
    for (const std::string* ref : {&p.image_a, &p.image_b}) {
      if (!images.find(*ref)) {
        throw Error(ErrorCode::kUnresolvedImage, context + ": unknown image '" + *ref + "'");
      }
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<PairRecord> load_pairs(const std::filesystem::path& path, const ImageTable& images) {
  return parse_pairs(CsvTable::read(path), images);
}

ImageTable consolidate_identity_attributes(const ImageTable& images,
                                           const AttributeSchema& schema) {
  std::vector<ImageRecord> records = images.records();
  for (const AttributeDef& def : schema.attributes()) {
    if (def.scope != Scope::kIdentity || !def.is_categorical()) continue;
    const std::size_t n_levels = def.categorical().levels.size();
    for (const auto& [identity, rows] : images.identities()) {
      std::vector<double> sum(n_levels, 0.0);
      std::size_t scored = 0;
      for (std::size_t r : rows) {
        const ImageRecord& rec = records[r];
        auto it = rec.soft_scores.find(def.name);
        if (it != rec.soft_scores.end()) {
          for (std::size_t l = 0; l < n_levels; ++l) sum[l] += it->second[l];
          ++scored;
        } else if (!rec.values.contains(def.name)) {
          missing(rec.image_id, def.name);
        }
      }
      if (scored == 0) continue;  // hard values only: keep as is
      // Argmax of the sum equals argmax of the mean; ties go to the earliest level.
      const std::string level = def.categorical().levels[argmax_first(sum)];
      for (std::size_t r : rows) records[r].values[def.name] = level;
    }
  }
  return ImageTable(std::move(records));
}

}  // namespace favfa::data
