#include "favfa/glm/marginal.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "favfa/error.hpp"
#include "favfa/parallel.hpp"
#include "favfa/random.hpp"

namespace favfa::glm {
namespace {

struct Estimate {
  double value = 0.0;
  Eigen::VectorXd gradient;  // d value / d beta
};

Estimate categorical_effect(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x,
                            const std::vector<std::size_t>& dummies, std::size_t level_col) {
  const auto n = static_cast<double>(x.rows());
  Eigen::MatrixXd x_ref = x;
  for (std::size_t j : dummies) x_ref.col(static_cast<Eigen::Index>(j)).setZero();
  const Eigen::VectorXd eta_ref = x_ref * beta;
  const Eigen::VectorXd eta_level = eta_ref.array() + beta(static_cast<Eigen::Index>(level_col));

  Eigen::VectorXd d_level(x.rows());
  Eigen::VectorXd d_ref(x.rows());
  double sum_diff = 0.0;
  double sum_d_level = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double p_level = sigmoid(eta_level(i));
    const double p_ref = sigmoid(eta_ref(i));
    sum_diff += p_level - p_ref;
    d_level(i) = p_level * (1.0 - p_level);
    d_ref(i) = p_ref * (1.0 - p_ref);
    sum_d_level += d_level(i);
  }
  Estimate e;
  e.value = sum_diff / n;
  e.gradient = x_ref.transpose() * (d_level - d_ref);
  e.gradient(static_cast<Eigen::Index>(level_col)) += sum_d_level;
  e.gradient /= n;
  return e;
}

Estimate continuous_effect(const Eigen::VectorXd& beta, const Eigen::MatrixXd& x, std::size_t col,
                           double scale) {
  const auto n = static_cast<double>(x.rows());
  const auto j = static_cast<Eigen::Index>(col);
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd second(x.rows());
  double sum_first = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double p = sigmoid(eta(i));
    const double first = p * (1.0 - p);
    sum_first += first;
    second(i) = first * (1.0 - 2.0 * p);
  }
  Estimate e;
  e.value = beta(j) * sum_first / n / scale;
  e.gradient = beta(j) * (x.transpose() * second);
  e.gradient(j) += sum_first;
  e.gradient /= n * scale;
  return e;
}

struct EffectSpec {
  std::string attribute;
  std::string level;
  std::string reference;
  std::string unit;
  bool continuous = false;
  std::size_t column = 0;
  std::vector<std::size_t> dummies;
  double scale = 1.0;
};

std::vector<EffectSpec> effect_specs(const DesignMatrix& design,
                                     const data::AttributeSchema& schema) {
  std::vector<EffectSpec> specs;
  for (const data::AttributeDef& def : schema.attributes()) {
    if (def.is_categorical()) {
      const auto dummies = design.dummy_columns(def.name);
      for (std::size_t j : dummies) {
        EffectSpec s;
        s.attribute = def.name;
        s.level = design.columns[j].level;
        s.reference = def.categorical().reference;
        s.column = j;
        s.dummies = dummies;
        specs.push_back(std::move(s));
      }
    } else if (auto j = design.column_of(def.name)) {
      EffectSpec s;
      s.attribute = def.name;
      s.unit = std::get<data::Continuous>(def.kind).unit;
      s.continuous = true;
      s.column = *j;
      s.scale = design.columns[*j].scale;
      specs.push_back(std::move(s));
    }
  }
  return specs;
}

Estimate evaluate(const EffectSpec& s, const Eigen::VectorXd& beta, const Eigen::MatrixXd& x) {
  return s.continuous ? continuous_effect(beta, x, s.column, s.scale)
                      : categorical_effect(beta, x, s.dummies, s.column);
}

std::string format_points(double estimate) {
  const double points = std::round(std::abs(estimate) * 1000.0) / 10.0;
  std::ostringstream os;
  if (points == std::floor(points)) {
    os << static_cast<long long>(points);
  } else {
    os.setf(std::ios::fixed);
    os.precision(1);
    os << points;
  }
  return os.str();
}

}  // namespace

std::vector<MarginalEffect> marginal_effects(const LogitFit& fit, const DesignMatrix& design,
                                             const data::AttributeSchema& schema, double alpha) {
  if (!fit.converged) {
    throw Error(ErrorCode::kNotConverged, "marginal effects need a converged fit");
  }
  std::vector<MarginalEffect> out;
  for (const EffectSpec& s : effect_specs(design, schema)) {
    const Estimate e = evaluate(s, fit.beta, design.x);
    MarginalEffect m;
    m.attribute = s.attribute;
    m.level = s.level;
    m.reference = s.reference;
    m.unit = s.unit;
    m.continuous = s.continuous;
    m.estimate = e.value;
    m.std_error = std::sqrt(std::max(0.0, e.gradient.dot(fit.covariance * e.gradient)));
    m.z = m.std_error > 0.0 ? m.estimate / m.std_error : 0.0;
    m.p_value = normal_two_sided_p(m.z);
    m.significant = m.p_value < alpha;
    out.push_back(std::move(m));
  }
  return out;
}

BootstrapResult bootstrap_marginal_effects(const DesignMatrix& design,
                                           const data::AttributeSchema& schema,
                                           std::size_t resamples, std::uint64_t seed,
                                           const FitOptions& options) {
  const auto specs = effect_specs(design, schema);
  const Eigen::Index n = design.rows();
  std::vector<std::optional<std::vector<double>>> draws(resamples);

  parallel_for(resamples, [&](std::size_t b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    Eigen::MatrixXd x(n, design.cols());
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
      x.row(i) = design.x.row(k);
      y(i) = design.y(k);
    }
    try {
      const LogitFit fit = fit_logit(x, y, design.labels, options);
      if (!fit.converged) return;
      std::vector<double> values;
      for (const EffectSpec& s : specs) values.push_back(evaluate(s, fit.beta, x).value);
      draws[b] = std::move(values);
    } catch (const Error&) {
      // resample degenerate (separation, singular, one class): skipped
    }
  });

  BootstrapResult result;
  result.std_errors.assign(specs.size(), 0.0);
  std::vector<double> sum(specs.size(), 0.0);
  for (const auto& d : draws) {
    if (!d) {
      ++result.failed;
      continue;
    }
    ++result.successful;
    for (std::size_t k = 0; k < specs.size(); ++k) sum[k] += (*d)[k];
  }
  if (result.successful < 2) return result;
  const auto m = static_cast<double>(result.successful);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const double mean = sum[k] / m;
    double ss = 0.0;
    for (const auto& d : draws) {
      if (d) ss += ((*d)[k] - mean) * ((*d)[k] - mean);
    }
    result.std_errors[k] = std::sqrt(ss / (m - 1.0));
  }
  return result;
}

std::string interpret(const MarginalEffect& effect, Outcome outcome) {
  const std::string direction = effect.estimate >= 0.0 ? "more" : "less";
  const std::string event =
      outcome == Outcome::kFalseMatch ? "wrongly matched" : "correctly matched";
  std::ostringstream os;
  os << "On average and other things being equal, ";
  if (effect.continuous) {
    os << "one additional unit of " << effect.attribute;
    if (!effect.unit.empty()) os << " (" << effect.unit << ")";
    os << " makes two people " << format_points(effect.estimate) << " points " << direction
       << " likely to be " << event << ".";
  } else {
    os << "two people from the " << effect.level << " subgroup are "
       << format_points(effect.estimate) << " points " << direction << " likely to be " << event
       << " than two people from the " << effect.reference << " subgroup.";
  }
  if (!effect.significant) os << " (not statistically significant)";
  return os.str();
}

}  // namespace favfa::glm
