#pragma once

#include <string>
#include <utility>
#include <vector>

namespace favfa::report {

struct BarSeries {
  std::string name;             // method label
  std::vector<double> values;   // one per category
  std::vector<double> errors;   // half-width of the error bar, may be empty
  std::vector<bool> emphasized; // false -> drawn translucent (non-significant)
};

struct BarPanel {
  std::string title;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<BarSeries> series;
};

/// Grouped bars around a zero line, one panel per outcome.
std::string grouped_bar_chart_svg(const std::string& title, const std::vector<BarPanel>& panels);

struct StackedBar {
  std::string name;
  std::vector<std::pair<std::string, double>> segments;  // (factor, height)
};

/// One stacked bar per entry; total height is the sum of segments.
std::string stacked_bar_chart_svg(const std::string& title, const std::string& y_label,
                                  const std::vector<StackedBar>& bars);

/// Sorted sample quantiles against uniform(0, 1) quantiles.
std::string uniform_qq_plot_svg(const std::string& title,
                                const std::vector<std::pair<std::string, std::vector<double>>>& samples);

}  // namespace favfa::report
