#include "favfa/data/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "favfa/data/csv.hpp"

namespace favfa::data {

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string schema_to_json(const AttributeSchema& schema) {
  nlohmann::ordered_json doc;
  doc["pair_aggregate"] = std::string(to_string(schema.pair_aggregate()));
  doc["attributes"] = nlohmann::ordered_json::array();
  for (const AttributeDef& def : schema.attributes()) {
    nlohmann::ordered_json a;
    a["name"] = def.name;
    a["scope"] = def.scope == Scope::kIdentity ? "identity" : "image";
    if (def.is_categorical()) {
      a["kind"] = "categorical";
      a["levels"] = def.categorical().levels;
      a["reference"] = def.categorical().reference;
    } else {
      a["kind"] = "continuous";
      a["unit"] = std::get<Continuous>(def.kind).unit;
      if (!def.bins.empty()) {
        auto bins = nlohmann::ordered_json::array();
        for (const Bin& b : def.bins) {
          bins.push_back({b.lower, std::isinf(b.upper) ? nlohmann::ordered_json(nullptr)
                                                       : nlohmann::ordered_json(b.upper)});
        }
        a["bins"] = std::move(bins);
      }
    }
    doc["attributes"].push_back(std::move(a));
  }
  return doc.dump(2) + "\n";
}

std::string images_to_csv(const ImageTable& images, const AttributeSchema& schema) {
  std::ostringstream os;
  os << "image_id,identity_id";
  for (const AttributeDef& def : schema.attributes()) {
    os << ',' << csv_escape(def.name);
    if (def.is_categorical()) {
      for (const auto& level : def.categorical().levels) os << ',' << csv_escape(def.name + ":" + level);
    }
  }
  os << '\n';
  for (const ImageRecord& rec : images.records()) {
    os << csv_escape(rec.image_id) << ',' << csv_escape(rec.identity_id);
    for (const AttributeDef& def : schema.attributes()) {
      os << ',';
      auto it = rec.values.find(def.name);
      if (it != rec.values.end()) {
        if (const auto* s = std::get_if<std::string>(&it->second)) {
          os << csv_escape(*s);
        } else {
          os << format_real(std::get<double>(it->second));
        }
      }
      if (def.is_categorical()) {
        auto sit = rec.soft_scores.find(def.name);
        for (std::size_t l = 0; l < def.categorical().levels.size(); ++l) {
          os << ',';
          if (sit != rec.soft_scores.end()) os << format_real(sit->second[l]);
        }
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string pairs_to_csv(std::span<const PairRecord> pairs) {
  std::ostringstream os;
  os << "pair_id,image_a,image_b,ground_truth,distance,predicted\n";
  for (const PairRecord& p : pairs) {
    os << csv_escape(p.pair_id) << ',' << csv_escape(p.image_a) << ',' << csv_escape(p.image_b)
       << ',' << (p.positive() ? "same" : "different") << ',' << format_real(p.distance) << ',';
    if (p.predicted) os << (*p.predicted == GroundTruth::kSame ? "same" : "different");
    os << '\n';
  }
  return os.str();
}

}  // namespace favfa::data
