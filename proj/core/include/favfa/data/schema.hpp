#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace favfa::data {

enum class Scope { kIdentity, kImage };

/// How continuous attributes are collapsed to one value per pair.
enum class PairAggregate { kMean, kAbsDiff };

std::string_view to_string(PairAggregate aggregate);
PairAggregate parse_pair_aggregate(std::string_view text);

struct Categorical {
  std::vector<std::string> levels;
  std::string reference;

  /// Index of `level` in `levels`, or nullopt.
  std::optional<std::size_t> index_of(std::string_view level) const;
};

struct Continuous {
  std::string unit;
};

/// Half-open interval [lower, upper). `upper` may be +infinity.
struct Bin {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const { return v >= lower && v < upper; }
};

struct AttributeDef {
  std::string name;
  std::variant<Categorical, Continuous> kind;
  Scope scope = Scope::kImage;
  std::vector<Bin> bins;  // continuous only; empty means "not binned"

  bool is_categorical() const { return std::holds_alternative<Categorical>(kind); }
  const Categorical& categorical() const { return std::get<Categorical>(kind); }

  /// Bin index of `value`; throws when the value falls outside every bin.
  std::size_t bin_of(double value) const;
};

/// Default brackets used when a continuous attribute declares no bins.
std::vector<Bin> default_age_bins();
std::vector<Bin> default_pose_bins();

class AttributeSchema {
 public:
  AttributeSchema() = default;
  /// Validates invariants; throws Error(kSchemaInvalid).
  explicit AttributeSchema(std::vector<AttributeDef> attributes,
                           PairAggregate aggregate = PairAggregate::kMean);

  const std::vector<AttributeDef>& attributes() const { return attributes_; }
  const AttributeDef* find(std::string_view name) const;
  const AttributeDef& at(std::string_view name) const;
  PairAggregate pair_aggregate() const { return aggregate_; }

  /// Names in declaration order.
  std::vector<std::string> names() const;

 private:
  std::vector<AttributeDef> attributes_;
  PairAggregate aggregate_ = PairAggregate::kMean;
};

/// Level name used for pairs whose two images disagree on a categorical.
inline constexpr std::string_view kCrossLevel = "Cross";

AttributeSchema parse_schema(std::string_view json_text);
AttributeSchema load_schema(const std::filesystem::path& path);

/// ethnicity{Caucasian*,African,Asian,Indian}, gender{Male*,Female}, age, pose.
AttributeSchema default_schema();

}  // namespace favfa::data
