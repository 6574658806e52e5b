#pragma once

#include <span>
#include <string>

#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"

namespace favfa::data {

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double value);

std::string schema_to_json(const AttributeSchema& schema);
/// Writes hard values where present, soft scores as `attr:level` columns.
std::string images_to_csv(const ImageTable& images, const AttributeSchema& schema);
std::string pairs_to_csv(std::span<const PairRecord> pairs);

}  // namespace favfa::data
