#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "favfa/anova/anova.hpp"
#include "favfa/balance/planner.hpp"
#include "favfa/balance/weights.hpp"
#include "favfa/diagnostics/residuals.hpp"
#include "favfa/glm/logit.hpp"
#include "favfa/glm/marginal.hpp"
#include "favfa/metrics/fairness.hpp"

namespace favfa::report {

using Json = nlohmann::ordered_json;

/// Raw proportions; the per-group rows carry counts as well as rates.
Json fairness_report_json(const metrics::FairnessReport& report,
                          const std::vector<std::string>& grouping, std::size_t min_support);
/// Rates in percent, matching the usual published table scale.
std::string per_group_csv(const metrics::FairnessReport& report);
/// Human-readable summary for stdout, metrics in percent.
std::string fairness_summary_text(const metrics::FairnessReport& report);

std::string coefficients_csv(const glm::LogitFit& fit);

struct EffectsBlock {
  glm::Outcome outcome = glm::Outcome::kTrueMatch;
  std::vector<glm::MarginalEffect> effects;
};

std::string marginal_effects_csv(const std::vector<EffectsBlock>& blocks);
Json marginal_effects_json(const std::vector<EffectsBlock>& blocks, double alpha);
/// Paired TMR / FMR panels. Non-significant bars are translucent.
std::string marginal_effects_svg(const std::vector<EffectsBlock>& blocks, const std::string& method);

std::string anova_csv(const anova::AnovaTable& table);
Json anova_json(const anova::AnovaTable& table);
std::string anova_svg(const std::vector<std::pair<std::string, anova::AnovaTable>>& tables);

Json diagnostics_json(const diagnostics::ResidualDiagnostics& d);

std::string weights_csv(const balance::SamplingWeights& weights);
/// One JSON object per identity.
std::string plan_jsonl(const balance::GenerationPlan& plan);

/// Outcome label used in file contents: "tmr" or "fmr".
std::string outcome_tag(glm::Outcome outcome);

}  // namespace favfa::report
