#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "favfa/anova/anova.hpp"
#include "favfa/data/schema.hpp"
#include "favfa/data/tables.hpp"
#include "favfa/diagnostics/residuals.hpp"
#include "favfa/glm/logit.hpp"
#include "favfa/glm/marginal.hpp"
#include "favfa/metrics/fairness.hpp"

namespace favfa::report {

struct AnalysisOptions {
  std::vector<std::string> grouping{"gender", "ethnicity"};
  std::size_t min_support = metrics::kDefaultMinSupport;
  double alpha = 0.05;
  std::vector<std::string> factor_order;  // empty = schema order
  std::uint64_t seed = 0;
  std::size_t bootstrap = 0;              // 0 disables the bootstrap SEs
  bool interactions = false;
  bool order_ranges = false;
  std::size_t diagnostic_simulations = diagnostics::kDefaultSimulations;
  std::string method = "model";           // legend label in charts
};

struct OutcomeAnalysis {
  glm::LogitFit fit;
  std::vector<glm::MarginalEffect> effects;
  diagnostics::ResidualDiagnostics diagnostics;
  std::size_t bootstrap_failures = 0;
};

struct AnalysisResult {
  metrics::FairnessReport fairness;
  OutcomeAnalysis tmr;
  OutcomeAnalysis fmr;
  anova::AnovaTable anova_positives;
  anova::AnovaTable anova_negatives;
  std::vector<anova::EtaRange> order_ranges_positives;
  std::vector<anova::EtaRange> order_ranges_negatives;
  /// File name -> content, everything except the manifest.
  std::map<std::string, std::string> files;
};

/// The full pipeline on in-memory tables. Any module error propagates.
AnalysisResult analyze(const data::AttributeSchema& schema, const data::ImageTable& images,
                       std::span<const data::PairRecord> pairs, const AnalysisOptions& options);

struct AnalysisConfig {
  std::filesystem::path schema_path;  // empty = built-in default schema
  std::filesystem::path images_path;
  std::filesystem::path pairs_path;
  std::filesystem::path out_dir;
  std::optional<data::PairAggregate> pair_aggregate;  // overrides the schema
  AnalysisOptions options;
};

/// Loads inputs, analyzes, and adds run_manifest.json to the bundle. Does
/// not touch the output directory.
AnalysisResult run_analysis(const AnalysisConfig& config);

/// Writes every file or none: files go to temporaries first and are renamed
/// once all writes succeed.
void write_bundle(const std::map<std::string, std::string>& files,
                  const std::filesystem::path& out_dir);

}  // namespace favfa::report
