#include "favfa/balance/planner.hpp"

#include <algorithm>
#include <set>

#include "favfa/data/csv.hpp"
#include "favfa/data/tables.hpp"
#include "favfa/error.hpp"
#include "favfa/metrics/diversity.hpp"
#include "favfa/random.hpp"

namespace favfa::balance {
namespace {

data::AttributeSchema sub_schema(const data::AttributeSchema& schema,
                                 const std::vector<std::string>& names) {
  std::vector<data::AttributeDef> defs;
  for (const auto& name : names) defs.push_back(schema.at(name));
  return data::AttributeSchema(std::move(defs), schema.pair_aggregate());
}

Segment segment_of(const data::ImageRecord& rec, const data::AttributeSchema& schema,
                   const PlannerConfig& config) {
  Segment s;
  for (const auto& name : config.segment_attributes) s.levels.push_back(rec.level(schema.at(name)));
  return s;
}

/// All joint cells, first segment attribute major, levels in schema order.
std::vector<Segment> all_cells(const data::AttributeSchema& schema, const PlannerConfig& config) {
  std::vector<Segment> cells{Segment{}};
  for (const auto& name : config.segment_attributes) {
    const auto& def = schema.at(name);
    if (!def.is_categorical()) {
      throw Error(ErrorCode::kPreconditionViolation,
                  "segment attribute '" + name + "' must be categorical");
    }
    std::vector<Segment> next;
    for (const auto& prefix : cells) {
      for (const auto& level : def.categorical().levels) {
        Segment s = prefix;
        s.levels.push_back(level);
        next.push_back(std::move(s));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::size_t parse_bin_index(const std::string& text, std::size_t n_bins, const std::string& ctx) {
  const double v = data::parse_real(text, ctx);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)) ||
      static_cast<std::size_t>(v) >= n_bins) {
    throw Error(ErrorCode::kParseError, ctx + ": bin index '" + text + "' out of range");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string Segment::label() const {
  std::string out;
  for (const auto& l : levels) {
    if (!out.empty()) out += '/';
    out += l;
  }
  return out;
}

std::vector<IdCandidate> load_id_candidates(const std::filesystem::path& path,
                                            const data::AttributeSchema& schema,
                                            const PlannerConfig& config) {
  const auto sub = sub_schema(schema, config.segment_attributes);
  const data::ImageTable table =
      data::consolidate_identity_attributes(data::load_images(path, sub), sub);
  std::vector<IdCandidate> out;
  for (const auto& rec : table.records()) out.push_back({rec.image_id, segment_of(rec, sub, config)});
  return out;
}

std::vector<StyleCandidate> load_style_pool(const std::filesystem::path& path,
                                            const data::AttributeSchema& schema,
                                            const PlannerConfig& config) {
  const data::CsvTable csv = data::CsvTable::read(path);
  const auto& age_def = schema.at(config.age_attribute);
  const auto& pose_def = schema.at(config.pose_attribute);
  const auto age_bin_col = csv.column(config.age_attribute + "_bin");
  const auto pose_bin_col = csv.column(config.pose_attribute + "_bin");

  std::vector<std::string> names = config.segment_attributes;
  if (!age_bin_col) names.push_back(config.age_attribute);
  if (!pose_bin_col) names.push_back(config.pose_attribute);
  const auto sub = sub_schema(schema, names);
  const data::ImageTable table = data::parse_images(csv, sub);

  std::vector<StyleCandidate> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& rec = table.records()[i];
    const std::string ctx = csv.origin() + " style '" + rec.image_id + "'";
    StyleCandidate s;
    s.image_id = rec.image_id;
    s.segment = segment_of(rec, sub, config);
    s.age_bin = age_bin_col ? parse_bin_index(csv.row(i)[*age_bin_col], age_def.bins.size(), ctx)
                            : age_def.bin_of(rec.real(age_def));
    s.pose_bin = pose_bin_col
                     ? parse_bin_index(csv.row(i)[*pose_bin_col], pose_def.bins.size(), ctx)
                     : pose_def.bin_of(rec.real(pose_def));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<IdCandidate> select_id_pool(std::span<const IdCandidate> candidates,
                                        const data::AttributeSchema& schema,
                                        std::size_t n_identities, std::uint64_t seed,
                                        const PlannerConfig& config) {
  const std::vector<Segment> cells = all_cells(schema, config);
  if (n_identities == 0 || n_identities % cells.size() != 0) {
    throw Error(ErrorCode::kNotDivisible,
                std::to_string(n_identities) + " identities cannot be split evenly over " +
                    std::to_string(cells.size()) + " segment cells");
  }
  const std::size_t per_cell = n_identities / cells.size();

  std::map<Segment, std::vector<std::string>> by_cell;
  for (const auto& c : candidates) by_cell[c.segment].push_back(c.image_id);

  std::vector<IdCandidate> out;
  out.reserve(n_identities);
  const std::uint64_t pool_seed = derive_seed(seed, "id-pool");
  for (const Segment& cell : cells) {
    std::vector<std::string> ids = by_cell[cell];
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < per_cell) {
      throw Error(ErrorCode::kInsufficientCandidates,
                  "segment " + cell.label() + ": have " + std::to_string(ids.size()) +
                      " candidates, need " + std::to_string(per_cell));
    }
    // Partial Fisher-Yates over the sorted list: seeded, order-independent.
    Rng rng(derive_seed(pool_seed, cell.label()));
    for (std::size_t k = 0; k < per_cell; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.below(ids.size() - k));
      std::swap(ids[k], ids[j]);
    }
    ids.resize(per_cell);
    std::sort(ids.begin(), ids.end());
    for (auto& id : ids) out.push_back({std::move(id), cell});
  }
  return out;
}

GenerationPlan assign_styles(std::span<const IdCandidate> ids,
                             std::span<const StyleCandidate> pool,
                             std::size_t samples_per_identity, const PlannerConfig& config) {
  struct Cell {
    std::size_t age_bin;
    std::size_t pose_bin;
    std::vector<std::string> images;  // sorted, unique
  };
  // Segment -> cells sorted by (age_bin, pose_bin).
  std::map<Segment, std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>>> grouped;
  for (const auto& s : pool) grouped[s.segment][{s.age_bin, s.pose_bin}].insert(s.image_id);

  std::map<Segment, std::vector<Cell>> cells_by_segment;
  for (auto& [segment, cells] : grouped) {
    auto& out = cells_by_segment[segment];
    for (auto& [key, images] : cells) {
      out.push_back({key.first, key.second, {images.begin(), images.end()}});
    }
  }

  // The greedy choice depends only on the segment, so it is computed once
  // per segment and shared by that segment's identities.
  std::map<Segment, std::vector<StyleAssignment>> cache;
  auto plan_for = [&](const Segment& segment) -> const std::vector<StyleAssignment>& {
    if (auto it = cache.find(segment); it != cache.end()) return it->second;
    auto cit = cells_by_segment.find(segment);
    std::size_t available = 0;
    if (cit != cells_by_segment.end()) {
      for (const auto& c : cit->second) available += c.images.size();
    }
    if (available < samples_per_identity) {
      throw Error(ErrorCode::kInsufficientStyles,
                  "segment " + segment.label() + ": " + std::to_string(available) +
                      " style candidates, need " + std::to_string(samples_per_identity));
    }
    const auto& cells = cit->second;
    std::vector<std::size_t> used(cells.size(), 0);
    std::vector<StyleAssignment> styles;
    styles.reserve(samples_per_identity);
    for (std::size_t step = 0; step < samples_per_identity; ++step) {
      std::size_t best = cells.size();
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (used[c] == cells[c].images.size()) continue;
        if (best == cells.size() || used[c] < used[best]) best = c;
      }
      const Cell& cell = cells[best];
      styles.push_back({cell.images[used[best]], cell.age_bin, cell.pose_bin});
      ++used[best];
    }
    return cache.emplace(segment, std::move(styles)).first->second;
  };

  GenerationPlan plan;
  plan.segment_attributes = config.segment_attributes;
  plan.samples_per_identity = samples_per_identity;
  plan.entries.reserve(ids.size());
  for (const auto& id : ids) plan.entries.push_back({id.image_id, id.segment, plan_for(id.segment)});
  return plan;
}

std::map<std::string, double> plan_diversity_report(const GenerationPlan& plan,
                                                    const data::AttributeSchema& schema,
                                                    const PlannerConfig& config) {
  std::map<std::string, double> out;
  for (std::size_t a = 0; a < plan.segment_attributes.size(); ++a) {
    const auto& def = schema.at(plan.segment_attributes[a]);
    std::vector<std::string> observed;
    for (const auto& e : plan.entries) observed.push_back(e.segment.levels.at(a));
    if (!observed.empty()) {
      out[def.name] = metrics::diversity_of(observed, def.categorical().levels);
    }
  }
  const auto bin_diversity = [&](const std::string& name, auto bin_of) {
    const auto& def = schema.at(name);
    std::vector<double> counts(def.bins.size(), 0.0);
    for (const auto& e : plan.entries) {
      for (const auto& s : e.styles) counts.at(bin_of(s)) += 1.0;
    }
    if (def.bins.size() >= 2 && !plan.entries.empty() && plan.samples_per_identity > 0) {
      out[name] = metrics::diversity(counts, def.bins.size());
    }
  };
  bin_diversity(config.age_attribute, [](const StyleAssignment& s) { return s.age_bin; });
  bin_diversity(config.pose_attribute, [](const StyleAssignment& s) { return s.pose_bin; });
  return out;
}

}  // namespace favfa::balance
