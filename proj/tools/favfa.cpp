// favfa: fairness analysis for face verification pair results.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "favfa/balance/planner.hpp"
#include "favfa/balance/weights.hpp"
#include "favfa/data/io.hpp"
#include "favfa/error.hpp"
#include "favfa/metrics/diversity.hpp"
#include "favfa/random.hpp"
#include "favfa/report/analyze.hpp"
#include "favfa/report/writers.hpp"
#include "favfa/sim/simulator.hpp"

namespace {

using namespace favfa;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

data::AttributeSchema schema_or_default(const std::string& path) {
  return path.empty() ? data::default_schema() : data::load_schema(path);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string two_dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string table_row(const std::map<std::string, double>& scores,
                      const std::vector<std::string>& order) {
  std::ostringstream head;
  std::ostringstream row;
  for (const auto& name : order) {
    const auto it = scores.find(name);
    if (it == scores.end()) continue;
    const std::string cell = two_dp(it->second);
    const std::size_t width = std::max(name.size(), cell.size()) + 2;
    head << name << std::string(width - name.size(), ' ');
    row << cell << std::string(width - cell.size(), ' ');
  }
  return head.str() + "\n" + row.str() + "\n";
}

/// Category labels of an attribute as they appear in the image table.
std::vector<std::string> categories_of(const data::AttributeDef& def) {
  if (def.is_categorical()) return def.categorical().levels;
  std::vector<std::string> bins;
  for (std::size_t b = 0; b < def.bins.size(); ++b) bins.push_back(std::to_string(b));
  return bins;
}

std::map<std::string, double> image_diversity(const data::ImageTable& images,
                                              const data::AttributeSchema& schema,
                                              const std::vector<std::string>& attributes) {
  std::map<std::string, double> scores;
  for (const auto& name : attributes) {
    const data::AttributeDef& def = schema.at(name);
    if (!def.is_categorical() && def.bins.empty()) {
      throw Error(ErrorCode::kPreconditionViolation, "continuous attribute '" + name + "' has no bins");
    }
    std::vector<std::string> observed;
    observed.reserve(images.size());
    for (const auto& img : images.records()) {
      observed.push_back(def.is_categorical() ? img.level(def) : std::to_string(def.bin_of(img.real(def))));
    }
    const std::vector<std::string> cats = categories_of(def);
    scores[name] = metrics::diversity_of(observed, cats);
  }
  return scores;
}

std::vector<std::string> default_diversity_attributes(const data::AttributeSchema& schema) {
  std::vector<std::string> out;
  for (const auto& def : schema.attributes()) {
    if (def.is_categorical() || !def.bins.empty()) out.push_back(def.name);
  }
  return out;
}

void print_error(const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"favfa - fairness analysis for face verification"};
  app.require_subcommand(1);

  // analyze
  report::AnalysisConfig cfg;
  std::string schema_path;
  std::string pair_aggregate;
  auto* analyze = app.add_subcommand("analyze", "Full fairness, regression and ANOVA report");
  analyze->add_option("--schema", schema_path, "Attribute schema JSON (default: built-in)")
      ->check(CLI::ExistingFile);
  analyze->add_option("--images", cfg.images_path, "Image metadata CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--pairs", cfg.pairs_path, "Pair results CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--group-by", cfg.options.grouping, "Grouping attributes")
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_option("--min-support", cfg.options.min_support, "Minimum pairs per group")
      ->capture_default_str();
  analyze->add_option("--alpha", cfg.options.alpha, "Significance level")->capture_default_str();
  analyze->add_option("--factor-order", cfg.options.factor_order, "ANOVA entry order")->delimiter(',');
  analyze->add_option("--pair-aggregate", pair_aggregate, "Continuous pair covariate: mean or absdiff")
      ->check(CLI::IsMember({"mean", "absdiff"}));
  analyze->add_option("--seed", cfg.options.seed, "Top-level seed")->capture_default_str();
  analyze->add_option("--out", cfg.out_dir, "Output directory")->required();
  analyze->add_option("--bootstrap", cfg.options.bootstrap, "Bootstrap resamples for marginal effects")
      ->capture_default_str();
  analyze->add_flag("--interactions", cfg.options.interactions, "Add categorical interaction terms to ANOVA");
  analyze->add_flag("--order-ranges", cfg.options.order_ranges, "Report eta squared ranges over all factor orders");
  analyze->add_option("--simulations", cfg.options.diagnostic_simulations, "Residual diagnostic replicates")
      ->check(CLI::Range(static_cast<std::size_t>(diagnostics::kMinSimulations), std::size_t{100000}))
      ->capture_default_str();
  analyze->add_option("--method", cfg.options.method, "Model label for charts")->capture_default_str();

  // diversity
  std::string div_images;
  std::string div_schema;
  std::vector<std::string> div_attrs;
  bool div_json = false;
  auto* diversity = app.add_subcommand("diversity", "Per-attribute normalized entropy of an image table");
  diversity->add_option("--images", div_images, "Image metadata CSV")->required()->check(CLI::ExistingFile);
  diversity->add_option("--schema", div_schema, "Attribute schema JSON")->check(CLI::ExistingFile);
  diversity->add_option("--attributes", div_attrs, "Attributes to score")->delimiter(',');
  diversity->add_flag("--json", div_json, "Emit JSON instead of a table row");

  // plan
  std::string plan_ids;
  std::string plan_styles;
  std::string plan_schema;
  std::string plan_out;
  std::size_t plan_n = 0;
  std::size_t plan_samples = 0;
  std::uint64_t plan_seed = 0;
  auto* plan = app.add_subcommand("plan", "Balanced identity pool and style assignment");
  plan->add_option("--ids", plan_ids, "ID candidate CSV")->required()->check(CLI::ExistingFile);
  plan->add_option("--styles", plan_styles, "Style pool CSV")->required()->check(CLI::ExistingFile);
  plan->add_option("--n-identities", plan_n, "Identities to select")->required();
  plan->add_option("--samples", plan_samples, "Styles per identity")->required();
  plan->add_option("--seed", plan_seed, "Seed")->capture_default_str();
  plan->add_option("--out", plan_out, "Plan JSONL")->required();
  plan->add_option("--schema", plan_schema, "Attribute schema JSON")->check(CLI::ExistingFile);

  // weights
  std::string w_images;
  std::string w_schema;
  std::string w_out;
  std::vector<std::string> w_attrs;
  auto* weights = app.add_subcommand("weights", "Inverse-frequency sampling weights");
  weights->add_option("--images", w_images, "Image metadata CSV")->required()->check(CLI::ExistingFile);
  weights->add_option("--schema", w_schema, "Attribute schema JSON")->check(CLI::ExistingFile);
  weights->add_option("--attributes", w_attrs, "Balancing attributes")->required()->delimiter(',');
  weights->add_option("--out", w_out, "Output CSV (default stdout)");

  // simulate
  sim::SimulationConfig sim_cfg;
  std::string sim_out;
  std::size_t sim_ids_per_cell = 0;
  std::size_t sim_styles_per_segment = 0;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic demo dataset");
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--seed", sim_cfg.seed, "Seed")->capture_default_str();
  simulate->add_option("--identities", sim_cfg.identities)->capture_default_str();
  simulate->add_option("--images-per-identity", sim_cfg.images_per_identity)->capture_default_str();
  simulate->add_option("--pairs", sim_cfg.pairs)->capture_default_str();
  simulate->add_option("--fmr-bias", sim_cfg.fmr_bias)->capture_default_str();
  simulate->add_option("--age-effect", sim_cfg.age_effect)->capture_default_str();
  simulate->add_option("--pose-effect", sim_cfg.pose_effect)->capture_default_str();
  simulate->add_flag("--soft-scores", sim_cfg.soft_scores);
  simulate->add_option("--planner-ids-per-cell", sim_ids_per_cell, "Also write ids.csv / styles.csv");
  simulate->add_option("--planner-styles-per-segment", sim_styles_per_segment)->default_val(400);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) {
      cfg.schema_path = schema_path;
      if (!pair_aggregate.empty()) cfg.pair_aggregate = data::parse_pair_aggregate(pair_aggregate);
      const report::AnalysisResult result = report::run_analysis(cfg);
      report::write_bundle(result.files, cfg.out_dir);
      std::cout << report::fairness_summary_text(result.fairness);
      std::cout << "wrote " << result.files.size() << " files to " << cfg.out_dir.string() << '\n';
    } else if (*diversity) {
      const data::AttributeSchema schema = schema_or_default(div_schema);
      const data::ImageTable images =
          data::consolidate_identity_attributes(data::load_images(div_images, schema), schema);
      const std::vector<std::string> attrs = div_attrs.empty() ? default_diversity_attributes(schema) : div_attrs;
      const auto scores = image_diversity(images, schema, attrs);
      if (div_json) {
        nlohmann::ordered_json j;
        for (const auto& a : attrs) j[a] = scores.at(a);
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << table_row(scores, attrs);
      }
    } else if (*plan) {
      const data::AttributeSchema schema = schema_or_default(plan_schema);
      const auto ids = balance::load_id_candidates(plan_ids, schema);
      const auto styles = balance::load_style_pool(plan_styles, schema);
      const auto pool = balance::select_id_pool(ids, schema, plan_n, derive_seed(plan_seed, "planner"));
      const balance::GenerationPlan generated = balance::assign_styles(pool, styles, plan_samples);
      write_text(plan_out, report::plan_jsonl(generated));
      const auto scores = balance::plan_diversity_report(generated, schema);
      std::vector<std::string> order;
      for (const auto& [name, score] : scores) order.push_back(name);
      std::cout << table_row(scores, order);
    } else if (*weights) {
      const data::AttributeSchema schema = schema_or_default(w_schema);
      const data::ImageTable images =
          data::consolidate_identity_attributes(data::load_images(w_images, schema), schema);
      const std::string csv = report::weights_csv(balance::sampling_weights(images, schema, w_attrs));
      if (w_out.empty()) {
        std::cout << csv;
      } else {
        write_text(w_out, csv);
      }
    } else if (*simulate) {
      const std::filesystem::path dir(sim_out);
      const sim::SimulatedDataset ds = sim::simulate_verification(sim_cfg);
      write_text(dir / "schema.json", data::schema_to_json(ds.schema));
      write_text(dir / "images.csv", data::images_to_csv(ds.images, ds.schema));
      write_text(dir / "pairs.csv", data::pairs_to_csv(ds.pairs));
      if (sim_ids_per_cell > 0) {
        const sim::PlannerPools pools = sim::simulate_planner_pools(
            ds.schema, sim_ids_per_cell, sim_styles_per_segment, derive_seed(sim_cfg.seed, "planner-pools"));
        write_text(dir / "ids.csv", sim::id_candidates_to_csv(pools.ids));
        write_text(dir / "styles.csv", sim::style_pool_to_csv(pools.styles));
      }
      std::cout << "wrote " << ds.images.size() << " images and " << ds.pairs.size() << " pairs to "
                << dir.string() << '\n';
    }
  } catch (const Error& e) {
    print_error(std::string(to_string(e.code())), e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    print_error("IoError", e.what());
    return kExitDomain;
  }
  return 0;
}
