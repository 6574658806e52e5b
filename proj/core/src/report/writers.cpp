#include "favfa/report/writers.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "favfa/data/csv.hpp"
#include "favfa/data/io.hpp"
#include "favfa/report/svg.hpp"

namespace favfa::report {
namespace {

using data::csv_escape;
using data::format_real;


Json opt_json(bool defined, double v) { return defined ? Json(v) : Json(nullptr); }

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

Json group_json(const metrics::GroupStats& g) {
  Json j;
  j["group"] = g.group.label();
  Json parts = Json::object();
  for (const auto& [attr, level] : g.group.parts) parts[attr] = level;
  j["levels"] = parts;
  j["n_pos"] = g.n_pos;
  j["n_neg"] = g.n_neg;
  j["tp"] = g.tp;
  j["fp"] = g.fp;
  j["tn"] = g.tn;
  j["fn"] = g.fn;
  j["tmr"] = opt_json(g.has_tmr(), g.tmr);
  j["fmr"] = opt_json(g.has_fmr(), g.fmr);
  j["accuracy"] = g.accuracy;
  j["selection_rate"] = g.selection_rate;
  return j;
}

std::string effect_label(const glm::MarginalEffect& e) {
  return e.continuous ? e.attribute : e.attribute + "=" + e.level;
}

}  // namespace

std::string outcome_tag(glm::Outcome outcome) {
  return outcome == glm::Outcome::kTrueMatch ? "tmr" : "fmr";
}

Json fairness_report_json(const metrics::FairnessReport& report,
                          const std::vector<std::string>& grouping, std::size_t min_support) {
  Json j;
  j["scale"] = "proportion";
  j["threshold"] = report.threshold;
  j["grouping"] = grouping;
  j["min_support"] = min_support;
  j["metrics"] = {{"dob", report.dob},         {"dpd", report.dpd}, {"eod", report.eod},
                  {"dpr", report.dpr},         {"eor", report.eor},
                  {"micro_accuracy", report.micro_accuracy}};
  Json groups = Json::array();
  for (const auto& g : report.per_group) groups.push_back(group_json(g));
  j["groups"] = groups;
  Json excluded = Json::array();
  for (const auto& g : report.excluded_groups) excluded.push_back(group_json(g));
  j["excluded_groups"] = excluded;
  return j;
}

std::string per_group_csv(const metrics::FairnessReport& report) {
  std::ostringstream os;
  os << "group,included,n_pos,n_neg,tp,fp,tn,fn,tmr_pct,fmr_pct,accuracy_pct,selection_rate_pct\n";
  const auto row = [&](const metrics::GroupStats& g, bool included) {
    os << csv_escape(g.group.label()) << ',' << (included ? "true" : "false") << ',' << g.n_pos << ','
       << g.n_neg << ',' << g.tp << ',' << g.fp << ',' << g.tn << ',' << g.fn << ','
       << (g.has_tmr() ? percent(g.tmr) : "") << ',' << (g.has_fmr() ? percent(g.fmr) : "") << ','
       << percent(g.accuracy) << ',' << percent(g.selection_rate) << '\n';
  };
  for (const auto& g : report.per_group) row(g, true);
  for (const auto& g : report.excluded_groups) row(g, false);
  return os.str();
}

std::string fairness_summary_text(const metrics::FairnessReport& report) {
  std::ostringstream os;
  os << "threshold " << format_real(report.threshold) << '\n';
  os << "DoB " << percent(report.dob) << "  DPD " << percent(report.dpd) << "  EOD "
     << percent(report.eod) << "  DPR " << percent(report.dpr) << "  EOR " << percent(report.eor)
     << "  Acc " << percent(report.micro_accuracy) << '\n';
  for (const auto& g : report.per_group) {
    os << "  " << g.group.label() << "  acc " << percent(g.accuracy) << "  tmr "
       << (g.has_tmr() ? percent(g.tmr) : "-") << "  fmr " << (g.has_fmr() ? percent(g.fmr) : "-")
       << "  n " << g.size() << '\n';
  }
  if (!report.excluded_groups.empty()) {
    os << "  excluded (low support):";
    for (const auto& g : report.excluded_groups) os << ' ' << g.group.label() << '(' << g.size() << ')';
    os << '\n';
  }
  return os.str();
}

std::string coefficients_csv(const glm::LogitFit& fit) {
  std::ostringstream os;
  os << "term,estimate,std_error,z,p_value\n";
  for (const auto& r : glm::coefficient_table(fit)) {
    os << csv_escape(r.term) << ',' << format_real(r.estimate) << ',' << format_real(r.std_error)
       << ',' << format_real(r.z) << ',' << format_real(r.p_value) << '\n';
  }
  return os.str();
}

std::string marginal_effects_csv(const std::vector<EffectsBlock>& blocks) {
  std::ostringstream os;
  os << "outcome,attribute,level,reference,unit,estimate,std_error,z,p_value,significant,"
        "bootstrap_std_error,interpretation\n";
  for (const auto& block : blocks) {
    for (const auto& e : block.effects) {
      os << outcome_tag(block.outcome) << ',' << csv_escape(e.attribute) << ','
         << csv_escape(e.level) << ',' << csv_escape(e.reference) << ',' << csv_escape(e.unit) << ','
         << format_real(e.estimate) << ',' << format_real(e.std_error) << ',' << format_real(e.z)
         << ',' << format_real(e.p_value) << ',' << (e.significant ? "true" : "false") << ','
         << (e.bootstrap_std_error ? format_real(*e.bootstrap_std_error) : "") << ','
         << csv_escape(glm::interpret(e, block.outcome)) << '\n';
    }
  }
  return os.str();
}

Json marginal_effects_json(const std::vector<EffectsBlock>& blocks, double alpha) {
  Json j;
  j["alpha"] = alpha;
  j["scale"] = "probability";
  j["continuous_effects"] = "continuous covariates standardized for fitting; effects per original unit";
  for (const auto& block : blocks) {
    Json arr = Json::array();
    for (const auto& e : block.effects) {
      Json row;
      row["attribute"] = e.attribute;
      if (e.continuous) {
        row["unit"] = e.unit;
      } else {
        row["level"] = e.level;
        row["reference"] = e.reference;
      }
      row["estimate"] = e.estimate;
      row["std_error"] = e.std_error;
      row["z"] = e.z;
      row["p_value"] = e.p_value;
      row["significant"] = e.significant;
      row["bootstrap_std_error"] = e.bootstrap_std_error ? Json(*e.bootstrap_std_error) : Json(nullptr);
      row["interpretation"] = glm::interpret(e, block.outcome);
      arr.push_back(row);
    }
    j[outcome_tag(block.outcome)] = arr;
  }
  return j;
}

std::string marginal_effects_svg(const std::vector<EffectsBlock>& blocks, const std::string& method) {
  std::vector<BarPanel> panels;
  for (const auto& block : blocks) {
    BarPanel panel;
    panel.title = block.outcome == glm::Outcome::kTrueMatch ? "True match rate" : "False match rate";
    panel.y_label = "marginal effect (points)";
    BarSeries series;
    series.name = method;
    for (const auto& e : block.effects) {
      panel.categories.push_back(effect_label(e));
      series.values.push_back(e.estimate);
      series.errors.push_back(1.96 * e.std_error);
      series.emphasized.push_back(e.significant);
    }
    panel.series.push_back(std::move(series));
    panels.push_back(std::move(panel));
  }
  return grouped_bar_chart_svg("Average marginal effects", panels);
}

std::string anova_csv(const anova::AnovaTable& table) {
  std::ostringstream os;
  os << "factor,df,sum_squares,eta_squared\n";
  for (const auto& f : table.factors) {
    os << csv_escape(f.name) << ',' << f.df << ',' << format_real(f.sum_squares) << ','
       << format_real(f.eta_squared) << '\n';
  }
  os << "Residuals," << table.residual_df << ',' << format_real(table.residual_ss) << ",\n";
  os << "Total," << (table.n > 0 ? table.n - 1 : 0) << ',' << format_real(table.total_ss) << ','
     << format_real(table.r_squared) << '\n';
  return os.str();
}

Json anova_json(const anova::AnovaTable& table) {
  Json j;
  j["subset"] = std::string(glm::to_string(table.subset));
  j["n"] = table.n;
  Json factors = Json::array();
  for (const auto& f : table.factors) {
    factors.push_back({{"factor", f.name},
                       {"df", f.df},
                       {"sum_squares", f.sum_squares},
                       {"eta_squared", f.eta_squared}});
  }
  j["factors"] = factors;
  j["residual_ss"] = table.residual_ss;
  j["residual_df"] = table.residual_df;
  j["total_ss"] = table.total_ss;
  j["r_squared"] = table.r_squared;
  j["warnings"] = table.warnings;
  return j;
}

std::string anova_svg(const std::vector<std::pair<std::string, anova::AnovaTable>>& tables) {
  std::vector<StackedBar> bars;
  for (const auto& [name, table] : tables) {
    StackedBar bar;
    bar.name = name;
    for (const auto& f : table.factors) bar.segments.emplace_back(f.name, f.eta_squared);
    bars.push_back(std::move(bar));
  }
  return stacked_bar_chart_svg("Explained variance of embedding distance", "eta squared", bars);
}

Json diagnostics_json(const diagnostics::ResidualDiagnostics& d) {
  Json j;
  j["n"] = d.scaled_residuals.size();
  j["n_simulations"] = d.n_simulations;
  j["seed"] = d.seed;
  j["uniformity"] = {{"ks_statistic", d.ks_statistic}, {"p_value", d.ks_p_value}};
  j["dispersion"] = {{"ratio", d.dispersion_ratio}, {"p_value", d.dispersion_p}};
  j["zero_inflation"] = {{"ratio", d.zero_inflation_ratio}, {"p_value", d.zero_inflation_p}};
  return j;
}

std::string weights_csv(const balance::SamplingWeights& weights) {
  std::ostringstream os;
  os << "image_id,weight,probability\n";
  for (const auto& e : weights.entries) {
    os << csv_escape(e.image_id) << ',' << format_real(e.weight) << ',' << format_real(e.probability)
       << '\n';
  }
  return os.str();
}

std::string plan_jsonl(const balance::GenerationPlan& plan) {
  std::ostringstream os;
  for (const auto& entry : plan.entries) {
    Json j;
    j["id_image"] = entry.id_image;
    Json seg = Json::object();
    for (std::size_t i = 0; i < plan.segment_attributes.size() && i < entry.segment.levels.size(); ++i) {
      seg[plan.segment_attributes[i]] = entry.segment.levels[i];
    }
    j["segment"] = seg;
    Json styles = Json::array();
    for (const auto& s : entry.styles) {
      styles.push_back({{"style_image", s.style_image}, {"age_bin", s.age_bin}, {"pose_bin", s.pose_bin}});
    }
    j["styles"] = styles;
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace favfa::report
