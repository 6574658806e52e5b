#include "favfa/data/schema.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "favfa/error.hpp"

namespace favfa::data {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorCode::kSchemaInvalid, msg);
}

void validate_bins(const AttributeDef& def) {
  if (def.bins.empty()) return;
  if (def.is_categorical()) invalid("attribute '" + def.name + "': bins on a categorical");
  for (std::size_t i = 0; i < def.bins.size(); ++i) {
    const Bin& b = def.bins[i];
    if (!(b.lower < b.upper)) invalid("attribute '" + def.name + "': empty or inverted bin");
    if (i > 0 && def.bins[i - 1].upper != b.lower) {
      invalid("attribute '" + def.name + "': bins must be sorted, disjoint and contiguous");
    }
  }
}

Bin parse_bin(const nlohmann::json& j, const std::string& attr) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number()) {
    invalid("attribute '" + attr + "': bin must be [lower, upper|null]");
  }
  Bin b;
  b.lower = j[0].get<double>();
  if (j[1].is_null()) {
    b.upper = kInf;
  } else if (j[1].is_number()) {
    b.upper = j[1].get<double>();
  } else {
    invalid("attribute '" + attr + "': bin upper bound must be a number or null");
  }
  return b;
}

}  // namespace

std::string_view to_string(PairAggregate aggregate) {
  return aggregate == PairAggregate::kMean ? "mean" : "absdiff";
}

PairAggregate parse_pair_aggregate(std::string_view text) {
  if (text == "mean") return PairAggregate::kMean;
  if (text == "absdiff") return PairAggregate::kAbsDiff;
  throw Error(ErrorCode::kParseError, "pair_aggregate must be 'mean' or 'absdiff', got '" +
                                          std::string(text) + "'");
}

std::optional<std::size_t> Categorical::index_of(std::string_view level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

std::size_t AttributeDef::bin_of(double value) const {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].contains(value)) return i;
  }
  std::ostringstream os;
  os << "attribute '" << name << "': value " << value << " outside all bins";
  throw Error(ErrorCode::kPreconditionViolation, os.str());
}

std::vector<Bin> default_age_bins() {
  return {{0, 3}, {3, 10}, {10, 20}, {20, 30}, {30, 40},
          {40, 50}, {50, 60}, {60, 70}, {70, kInf}};
}

std::vector<Bin> default_pose_bins() {
  return {{0, 10}, {10, 20}, {20, 35}, {35, 60}, {60, kInf}};
}

AttributeSchema::AttributeSchema(std::vector<AttributeDef> attributes, PairAggregate aggregate)
    : attributes_(std::move(attributes)), aggregate_(aggregate) {
  if (attributes_.empty()) invalid("schema declares no attributes");
  std::set<std::string, std::less<>> names;
  for (const AttributeDef& def : attributes_) {
    if (def.name.empty()) invalid("attribute with empty name");
    if (def.name.find(':') != std::string::npos) {
      invalid("attribute '" + def.name + "': ':' is reserved for soft-score columns");
    }
    if (!names.insert(def.name).second) invalid("duplicate attribute '" + def.name + "'");
    if (def.is_categorical()) {
      const Categorical& cat = def.categorical();
      if (cat.levels.empty()) invalid("attribute '" + def.name + "' has no levels");
      std::set<std::string, std::less<>> seen;
      for (const std::string& level : cat.levels) {
        if (level.empty()) invalid("attribute '" + def.name + "': empty level name");
        if (level == kCrossLevel) {
          invalid("attribute '" + def.name + "': level name 'Cross' is reserved");
        }
        if (!seen.insert(level).second) {
          invalid("attribute '" + def.name + "': duplicate level '" + level + "'");
        }
      }
      if (!cat.index_of(cat.reference)) {
        invalid("attribute '" + def.name + "': reference level '" + cat.reference +
                "' is not among its levels");
      }
    }
    validate_bins(def);
  }
}

const AttributeDef* AttributeSchema::find(std::string_view name) const {
  for (const AttributeDef& def : attributes_) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

const AttributeDef& AttributeSchema::at(std::string_view name) const {
  if (const AttributeDef* def = find(name)) return *def;
  throw Error(ErrorCode::kSchemaInvalid, "unknown attribute '" + std::string(name) + "'");
}

std::vector<std::string> AttributeSchema::names() const {
  std::vector<std::string> out;
  out.reserve(attributes_.size());
  for (const AttributeDef& def : attributes_) out.push_back(def.name);
  return out;
}

AttributeSchema parse_schema(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("schema JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("attributes") || !doc["attributes"].is_array()) {
    throw Error(ErrorCode::kParseError, "schema JSON must be an object with an 'attributes' array");
  }
  PairAggregate aggregate = PairAggregate::kMean;
  if (doc.contains("pair_aggregate")) {
    aggregate = parse_pair_aggregate(doc["pair_aggregate"].get<std::string>());
  }
  std::vector<AttributeDef> defs;
  try {
    for (const auto& a : doc["attributes"]) {
      AttributeDef def;
      def.name = a.at("name").get<std::string>();
      const std::string kind = a.at("kind").get<std::string>();
      const std::string scope = a.value("scope", std::string("image"));
      if (scope == "identity") {
        def.scope = Scope::kIdentity;
      } else if (scope == "image") {
        def.scope = Scope::kImage;
      } else {
        invalid("attribute '" + def.name + "': scope must be 'identity' or 'image'");
      }
      if (kind == "categorical") {
        Categorical cat;
        cat.levels = a.at("levels").get<std::vector<std::string>>();
        cat.reference = a.value("reference", cat.levels.empty() ? std::string() : cat.levels[0]);
        def.kind = std::move(cat);
      } else if (kind == "continuous") {
        def.kind = Continuous{a.value("unit", std::string())};
        if (a.contains("bins")) {
          for (const auto& b : a["bins"]) def.bins.push_back(parse_bin(b, def.name));
        } else if (def.name == "age") {
          def.bins = default_age_bins();
        } else if (def.name == "pose") {
          def.bins = default_pose_bins();
        }
      } else {
        invalid("attribute '" + def.name + "': kind must be 'categorical' or 'continuous'");
      }
      defs.push_back(std::move(def));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("schema JSON: ") + e.what());
  }
  return AttributeSchema(std::move(defs), aggregate);
}

AttributeSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open schema '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_schema(buffer.str());
}

AttributeSchema default_schema() {
  std::vector<AttributeDef> defs;
  defs.push_back({"ethnicity", Categorical{{"Caucasian", "African", "Asian", "Indian"}, "Caucasian"},
                  Scope::kIdentity, {}});
  defs.push_back({"gender", Categorical{{"Male", "Female"}, "Male"}, Scope::kIdentity, {}});
  defs.push_back({"age", Continuous{"years"}, Scope::kImage, default_age_bins()});
  defs.push_back({"pose", Continuous{"degrees"}, Scope::kImage, default_pose_bins()});
  return AttributeSchema(std::move(defs));
}

}  // namespace favfa::data
