#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "favfa/data/csv.hpp"
#include "favfa/data/schema.hpp"

namespace favfa::data {

using AttributeValue = std::variant<std::string, double>;

struct ImageRecord {
  std::string image_id;
  std::string identity_id;
  std::map<std::string, AttributeValue, std::less<>> values;
  /// Categorical attribute -> probability per schema level.
  std::map<std::string, std::vector<double>, std::less<>> soft_scores;

  /// Hard level if set, else argmax of the soft scores (earliest level on
  /// ties). Throws MissingAttribute.
  std::string level(const AttributeDef& def) const;
  /// Continuous value. Throws MissingAttribute.
  double real(const AttributeDef& def) const;
};

/// Immutable after construction. Keeps row order and an id index.
class ImageTable {
 public:
  ImageTable() = default;
  explicit ImageTable(std::vector<ImageRecord> records);

  const std::vector<ImageRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const ImageRecord* find(std::string_view image_id) const;
  /// Row indices per identity, identities in first-seen order.
  const std::vector<std::pair<std::string, std::vector<std::size_t>>>& identities() const {
    return identities_;
  }

 private:
  std::vector<ImageRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> identities_;
};

enum class GroundTruth { kSame, kDifferent };

GroundTruth parse_ground_truth(std::string_view text);

struct PairRecord {
  std::string pair_id;
  std::string image_a;
  std::string image_b;
  GroundTruth ground_truth = GroundTruth::kDifferent;
  double distance = 0.0;
  std::optional<GroundTruth> predicted;

  bool positive() const { return ground_truth == GroundTruth::kSame; }
};

/// Reads an image CSV. Required columns: image_id; identity_id is optional
/// (defaults to image_id). Each schema attribute comes from a column of the
/// same name, `attr:level` soft-score columns, or, for continuous
/// attributes, `<attr>_pitch`/`<attr>_yaw`/`<attr>_roll` components whose
/// Euclidean norm becomes the value.
ImageTable load_images(const std::filesystem::path& path, const AttributeSchema& schema);
ImageTable parse_images(const CsvTable& csv, const AttributeSchema& schema);

/// Reads a pair CSV with columns pair_id, image_a, image_b, ground_truth,
/// distance and optional predicted. Image refs are checked against `images`.
std::vector<PairRecord> load_pairs(const std::filesystem::path& path, const ImageTable& images);
std::vector<PairRecord> parse_pairs(const CsvTable& csv, const ImageTable& images);

/// Averages identity-scoped soft scores over each identity's images and
/// writes the argmax level onto every image of the identity.
ImageTable consolidate_identity_attributes(const ImageTable& images,
                                           const AttributeSchema& schema);

}  // namespace favfa::data
