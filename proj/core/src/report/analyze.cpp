#include "favfa/report/analyze.hpp"

#include <array>
#include <Eigen/Core>
#include <fstream>
#include <openssl/opensslv.h>
#include <system_error>

#include "favfa/data/covariates.hpp"
#include "favfa/data/io.hpp"
#include "favfa/error.hpp"
#include "favfa/glm/design.hpp"
#include "favfa/metrics/threshold.hpp"
#include "favfa/parallel.hpp"
#include "favfa/random.hpp"
#include "favfa/report/manifest.hpp"
#include "favfa/report/svg.hpp"
#include "favfa/report/writers.hpp"

namespace favfa::report {
namespace {

void validate(const data::AttributeSchema& schema, const AnalysisOptions& options) {
  if (options.grouping.empty()) {
    throw Error(ErrorCode::kPreconditionViolation, "grouping needs at least one attribute");
  }
  for (const auto& name : options.grouping) {
    const data::AttributeDef* def = schema.find(name);
    if (def == nullptr || !def->is_categorical()) {
      throw Error(ErrorCode::kPreconditionViolation,
                  "grouping attribute '" + name + "' is not a categorical schema attribute");
    }
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kPreconditionViolation, "alpha must lie in (0, 1)");
  }
  if (options.min_support == 0) {
    throw Error(ErrorCode::kPreconditionViolation, "min_support must be positive");
  }
  for (const auto& name : options.factor_order) {
    if (schema.find(name) == nullptr) {
      throw Error(ErrorCode::kPreconditionViolation, "unknown factor '" + name + "'");
    }
  }
}

OutcomeAnalysis analyze_outcome(const data::AttributeSchema& schema,
                                std::span<const data::PairRecord> pairs,
                                std::span<const data::PairCovariates> covs,
                                std::span<const data::GroundTruth> predicted, glm::Subset subset,
                                const AnalysisOptions& options) {
  const std::string tag = subset == glm::Subset::kPositives ? "tmr" : "fmr";
  const glm::DesignMatrix design = glm::build_design(pairs, covs, predicted, schema, subset);
  OutcomeAnalysis out;
  out.fit = glm::fit_logit(design);
  out.effects = glm::marginal_effects(out.fit, design, schema, options.alpha);
  if (options.bootstrap > 0) {
    const glm::BootstrapResult boot = glm::bootstrap_marginal_effects(
        design, schema, options.bootstrap, derive_seed(options.seed, "bootstrap/" + tag));
    out.bootstrap_failures = boot.failed;
    if (boot.successful >= 2) {
      for (std::size_t i = 0; i < out.effects.size() && i < boot.std_errors.size(); ++i) {
        out.effects[i].bootstrap_std_error = boot.std_errors[i];
      }
    }
  }
  out.diagnostics = diagnostics::simulate_residuals(out.fit, design, options.diagnostic_simulations,
                                                    derive_seed(options.seed, "diagnostics/" + tag));
  return out;
}

std::vector<anova::EtaRange> order_ranges(const data::AttributeSchema& schema,
                                          std::span<const data::PairRecord> pairs,
                                          std::span<const data::PairCovariates> covs,
                                          glm::Subset subset, const AnalysisOptions& options) {
  const data::GroundTruth want =
      subset == glm::Subset::kPositives ? data::GroundTruth::kSame : data::GroundTruth::kDifferent;
  std::vector<data::PairCovariates> sub_covs;
  std::vector<double> response;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].ground_truth != want) continue;
    sub_covs.push_back(covs[i]);
    response.push_back(pairs[i].distance);
  }
  std::vector<std::string> factors = options.factor_order;
  if (factors.empty()) factors = schema.names();
  return anova::eta_squared_order_ranges(sub_covs, response, schema, factors);
}

Json ranges_json(const std::vector<anova::EtaRange>& ranges) {
  Json arr = Json::array();
  for (const auto& r : ranges) arr.push_back({{"factor", r.name}, {"min", r.min}, {"max", r.max}});
  return arr;
}

Json options_json(const AnalysisOptions& o) {
  Json j;
  j["grouping"] = o.grouping;
  j["min_support"] = o.min_support;
  j["alpha"] = o.alpha;
  j["factor_order"] = o.factor_order;
  j["seed"] = o.seed;
  j["bootstrap"] = o.bootstrap;
  j["interactions"] = o.interactions;
  j["order_ranges"] = o.order_ranges;
  j["diagnostic_simulations"] = o.diagnostic_simulations;
  j["method"] = o.method;
  return j;
}

Json input_json(const std::filesystem::path& path) {
  return {{"file", path.filename().generic_string()}, {"sha256", sha256_file(path)}};
}


}  // namespace

AnalysisResult analyze(const data::AttributeSchema& schema, const data::ImageTable& raw_images,
                       std::span<const data::PairRecord> pairs, const AnalysisOptions& options) {
  validate(schema, options);
  if (pairs.empty()) throw Error(ErrorCode::kDegeneratePairs, "no pairs");
  const data::ImageTable images = data::consolidate_identity_attributes(raw_images, schema);

  AnalysisResult result;
  const metrics::ThresholdResult threshold = metrics::optimize_threshold(pairs);
  const std::vector<data::GroundTruth> predicted =
      metrics::resolve_predictions(pairs, threshold.threshold);
  const std::vector<data::PairCovariates> covs = data::derive_all_covariates(pairs, images, schema);

  const metrics::GroupConfusion confusion =
      metrics::group_confusion(pairs, covs, predicted, options.grouping, options.min_support);
  result.fairness = metrics::fairness_report(confusion, threshold.threshold);

  // The two outcome models are independent; each slot owns its output.
  std::array<OutcomeAnalysis, 2> outcomes;
  parallel_for(2, [&](std::size_t i) {
    outcomes[i] = analyze_outcome(schema, pairs, covs, predicted,
                                  i == 0 ? glm::Subset::kPositives : glm::Subset::kNegatives, options);
  });
  result.tmr = std::move(outcomes[0]);
  result.fmr = std::move(outcomes[1]);

  anova::AnovaOptions anova_opts;
  anova_opts.factor_order = options.factor_order;
  anova_opts.interactions = options.interactions;
  result.anova_positives = anova::anova_distances(pairs, covs, schema, glm::Subset::kPositives, anova_opts);
  result.anova_negatives = anova::anova_distances(pairs, covs, schema, glm::Subset::kNegatives, anova_opts);
  if (options.order_ranges) {
    result.order_ranges_positives = order_ranges(schema, pairs, covs, glm::Subset::kPositives, options);
    result.order_ranges_negatives = order_ranges(schema, pairs, covs, glm::Subset::kNegatives, options);
  }

  auto& files = result.files;
  files["fairness_report.json"] =
      fairness_report_json(result.fairness, options.grouping, options.min_support).dump(2) + "\n";
  files["per_group.csv"] = per_group_csv(result.fairness);
  files["logit_tmr.csv"] = coefficients_csv(result.tmr.fit);
  files["logit_fmr.csv"] = coefficients_csv(result.fmr.fit);

  const std::vector<EffectsBlock> blocks{{glm::Outcome::kTrueMatch, result.tmr.effects},
                                         {glm::Outcome::kFalseMatch, result.fmr.effects}};
  files["marginal_effects.csv"] = marginal_effects_csv(blocks);
  Json effects = marginal_effects_json(blocks, options.alpha);
  if (options.bootstrap > 0) {
    effects["bootstrap"] = {{"resamples", options.bootstrap},
                            {"failed_tmr", result.tmr.bootstrap_failures},
                            {"failed_fmr", result.fmr.bootstrap_failures}};
  }
  files["marginal_effects.json"] = effects.dump(2) + "\n";
  files["marginal_effects.svg"] = marginal_effects_svg(blocks, options.method);

  files["anova_pos.csv"] = anova_csv(result.anova_positives);
  files["anova_neg.csv"] = anova_csv(result.anova_negatives);
  files["anova_pos.svg"] = anova_svg({{options.method, result.anova_positives}});
  files["anova_neg.svg"] = anova_svg({{options.method, result.anova_negatives}});
  Json anova_doc;
  anova_doc["decomposition"] = "sequential (type I)";
  anova_doc["factor_order"] = options.factor_order.empty() ? schema.names() : options.factor_order;
  anova_doc["note"] =
      "with unbalanced factors each eta squared depends on the entry order; "
      "request order ranges to see the spread over all orders";
  anova_doc["positives"] = anova_json(result.anova_positives);
  anova_doc["negatives"] = anova_json(result.anova_negatives);
  if (options.order_ranges) {
    anova_doc["order_ranges"] = {{"positives", ranges_json(result.order_ranges_positives)},
                                 {"negatives", ranges_json(result.order_ranges_negatives)}};
  }
  files["anova.json"] = anova_doc.dump(2) + "\n";

  Json diag;
  diag["tmr"] = diagnostics_json(result.tmr.diagnostics);
  diag["fmr"] = diagnostics_json(result.fmr.diagnostics);
  files["diagnostics.json"] = diag.dump(2) + "\n";
  files["diagnostics_qq.svg"] = uniform_qq_plot_svg(
      "Scaled residuals", {{"TMR model", result.tmr.diagnostics.scaled_residuals},
                           {"FMR model", result.fmr.diagnostics.scaled_residuals}});
  return result;
}

AnalysisResult run_analysis(const AnalysisConfig& config) {
  data::AttributeSchema schema = config.schema_path.empty()
                                     ? data::default_schema()
                                     : data::load_schema(config.schema_path);
  if (config.pair_aggregate) schema = data::AttributeSchema(schema.attributes(), *config.pair_aggregate);
  const data::ImageTable images = data::load_images(config.images_path, schema);
  const std::vector<data::PairRecord> pairs = data::load_pairs(config.pairs_path, images);

  AnalysisResult result = analyze(schema, images, pairs, config.options);

  Json manifest;
  manifest["tool"] = "favfa";
  manifest["version"] = std::string(library_version());
  Json inputs;
  if (config.schema_path.empty()) {
    inputs["schema"] = {{"file", nullptr}, {"sha256", sha256_hex(data::schema_to_json(schema))}};
  } else {
    inputs["schema"] = input_json(config.schema_path);
  }
  inputs["images"] = input_json(config.images_path);
  inputs["pairs"] = input_json(config.pairs_path);
  manifest["inputs"] = inputs;
  Json cfg = options_json(config.options);
  cfg["pair_aggregate"] = std::string(data::to_string(schema.pair_aggregate()));
  manifest["config"] = cfg;
  manifest["threshold"] = result.fairness.threshold;
  Json outputs = Json::object();
  for (const auto& [name, content] : result.files) outputs[name] = sha256_hex(content);
  manifest["outputs"] = outputs;
  manifest["libraries"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
      {"openssl", OPENSSL_VERSION_TEXT}};
  result.files["run_manifest.json"] = manifest.dump(2) + "\n";
  return result;
}

void write_bundle(const std::map<std::string, std::string>& files,
                  const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<fs::path> temps;
  const auto cleanup = [&] {
    std::error_code ignored;
    for (const auto& t : temps) fs::remove(t, ignored);
  };
  for (const auto& [name, content] : files) {
    const fs::path tmp = out_dir / (name + ".partial");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      cleanup();
      throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    }
  }
  std::size_t i = 0;
  for (const auto& [name, content] : files) {
    fs::rename(temps[i], out_dir / name, ec);
    if (ec) {
      cleanup();
      throw Error(ErrorCode::kIoError, "cannot finalize " + name + ": " + ec.message());
    }
    ++i;
  }
}

}  // namespace favfa::report
