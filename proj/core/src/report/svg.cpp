#include "favfa/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace favfa::report {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void open_svg(std::ostringstream& os, double width, double height, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
}

/// Tick step giving roughly five ticks over [0, span].
double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

void legend(std::ostringstream& os, double x, double y, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(yy - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << kPalette[i % kPaletteSize] << "\"/>\n";
    os << "<text x=\"" << num(x + 14) << "\" y=\"" << num(yy) << "\">" << escape(names[i])
       << "</text>\n";
  }
}

}  // namespace

std::string grouped_bar_chart_svg(const std::string& title, const std::vector<BarPanel>& panels) {
  const double panel_w = 420.0;
  const double panel_h = 300.0;
  const double left = 60.0;
  const double top = 50.0;
  const double bottom = 110.0;
  const double width = left + panel_w * static_cast<double>(std::max<std::size_t>(1, panels.size())) + 140.0;
  const double height = top + panel_h + bottom;

  std::ostringstream os;
  open_svg(os, width, height, title);
  std::set<std::string> seen;
  std::vector<std::string> names;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const BarPanel& panel = panels[p];
    const double x0 = left + panel_w * static_cast<double>(p);
    const double plot_w = panel_w - 40.0;

    double extent = 0.0;
    for (const auto& s : panel.series) {
      for (std::size_t c = 0; c < s.values.size(); ++c) {
        const double e = c < s.errors.size() ? s.errors[c] : 0.0;
        extent = std::max(extent, std::abs(s.values[c]) + e);
      }
      if (seen.insert(s.name).second) names.push_back(s.name);
    }
    const double step = nice_step(extent);
    const double ymax = std::max(step, std::ceil(extent / step) * step);
    const auto y_of = [&](double v) { return top + panel_h / 2.0 - v / ymax * (panel_h / 2.0); };

    os << "<g>\n<text x=\"" << num(x0 + plot_w / 2) << "\" y=\"" << num(top - 10)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.title) << "</text>\n";
    for (double t = -ymax; t <= ymax + 1e-12; t += step) {
      os << "<line x1=\"" << num(x0) << "\" x2=\"" << num(x0 + plot_w) << "\" y1=\"" << num(y_of(t))
         << "\" y2=\"" << num(y_of(t)) << "\" stroke=\"#e0e0e0\"/>\n";
      os << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y_of(t) + 4)
         << "\" text-anchor=\"end\">" << num(t * 100.0) << "</text>\n";
    }
    os << "<line x1=\"" << num(x0) << "\" x2=\"" << num(x0 + plot_w) << "\" y1=\"" << num(y_of(0))
       << "\" y2=\"" << num(y_of(0)) << "\" stroke=\"black\"/>\n";
    os << "<text transform=\"translate(" << num(x0 - 42) << ',' << num(top + panel_h / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << escape(panel.y_label) << "</text>\n";

    const std::size_t n_cat = std::max<std::size_t>(1, panel.categories.size());
    const double group_w = plot_w / static_cast<double>(n_cat);
    const std::size_t n_series = std::max<std::size_t>(1, panel.series.size());
    const double bar_w = group_w * 0.8 / static_cast<double>(n_series);
    for (std::size_t c = 0; c < panel.categories.size(); ++c) {
      const double gx = x0 + group_w * static_cast<double>(c) + group_w * 0.1;
      for (std::size_t s = 0; s < panel.series.size(); ++s) {
        const BarSeries& series = panel.series[s];
        if (c >= series.values.size()) continue;
        const double v = series.values[c];
        const double bx = gx + bar_w * static_cast<double>(s);
        const double y1 = y_of(std::max(v, 0.0));
        const double y2 = y_of(std::min(v, 0.0));
        const bool strong = c >= series.emphasized.size() || series.emphasized[c];
        const auto color_index =
            static_cast<std::size_t>(std::find(names.begin(), names.end(), series.name) - names.begin());
        os << "<rect x=\"" << num(bx) << "\" y=\"" << num(y1) << "\" width=\"" << num(bar_w)
           << "\" height=\"" << num(y2 - y1) << "\" fill=\"" << kPalette[color_index % kPaletteSize]
           << "\" fill-opacity=\"" << (strong ? "1.00" : "0.30") << "\"/>\n";
        if (c < series.errors.size() && series.errors[c] > 0.0) {
          const double cx = bx + bar_w / 2;
          os << "<line x1=\"" << num(cx) << "\" x2=\"" << num(cx) << "\" y1=\""
             << num(y_of(v - series.errors[c])) << "\" y2=\"" << num(y_of(v + series.errors[c]))
             << "\" stroke=\"black\" stroke-opacity=\"" << (strong ? "1.00" : "0.30") << "\"/>\n";
        }
      }
      const double lx = gx + group_w * 0.4;
      os << "<text transform=\"translate(" << num(lx) << ',' << num(top + panel_h + 8)
         << ") rotate(45)\">" << escape(panel.categories[c]) << "</text>\n";
    }
    os << "</g>\n";
  }
  legend(os, width - 130.0, top + 10.0, names);
  os << "</svg>\n";
  return os.str();
}

std::string stacked_bar_chart_svg(const std::string& title, const std::string& y_label,
                                  const std::vector<StackedBar>& bars) {
  const double left = 60.0;
  const double top = 40.0;
  const double plot_h = 300.0;
  const double bar_slot = 80.0;
  const double plot_w = bar_slot * static_cast<double>(std::max<std::size_t>(1, bars.size()));
  const double width = left + plot_w + 180.0;
  const double height = top + plot_h + 80.0;

  std::vector<std::string> factors;
  double total_max = 0.0;
  for (const auto& b : bars) {
    double total = 0.0;
    for (const auto& [name, h] : b.segments) {
      if (std::find(factors.begin(), factors.end(), name) == factors.end()) factors.push_back(name);
      total += std::max(0.0, h);
    }
    total_max = std::max(total_max, total);
  }
  const double step = nice_step(total_max);
  const double ymax = std::max(step, std::ceil(total_max / step) * step);
  const auto y_of = [&](double v) { return top + plot_h - v / ymax * plot_h; };

  std::ostringstream os;
  open_svg(os, width, height, title);
  for (double t = 0.0; t <= ymax + 1e-12; t += step) {
    os << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + plot_w) << "\" y1=\"" << num(y_of(t))
       << "\" y2=\"" << num(y_of(t)) << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << num(left - 4) << "\" y=\"" << num(y_of(t) + 4) << "\" text-anchor=\"end\">"
       << num(t) << "</text>\n";
  }
  os << "<text transform=\"translate(" << num(left - 44) << ',' << num(top + plot_h / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = left + bar_slot * static_cast<double>(i) + 15.0;
    double base = 0.0;
    for (const auto& [name, h] : bars[i].segments) {
      const double hh = std::max(0.0, h);
      const auto color_index =
          static_cast<std::size_t>(std::find(factors.begin(), factors.end(), name) - factors.begin());
      os << "<rect x=\"" << num(x) << "\" y=\"" << num(y_of(base + hh)) << "\" width=\"50.00\" height=\""
         << num(y_of(base) - y_of(base + hh)) << "\" fill=\"" << kPalette[color_index % kPaletteSize]
         << "\"/>\n";
      base += hh;
    }
    os << "<text x=\"" << num(x + 25) << "\" y=\"" << num(y_of(base) - 4)
       << "\" text-anchor=\"middle\" font-size=\"10\">" << num(base) << "</text>\n";
    os << "<text x=\"" << num(x + 25) << "\" y=\"" << num(top + plot_h + 16)
       << "\" text-anchor=\"middle\">" << escape(bars[i].name) << "</text>\n";
  }
  legend(os, left + plot_w + 20.0, top + 10.0, factors);
  os << "</svg>\n";
  return os.str();
}

std::string uniform_qq_plot_svg(
    const std::string& title, const std::vector<std::pair<std::string, std::vector<double>>>& samples) {
  const double left = 60.0;
  const double top = 40.0;
  const double size = 300.0;
  const double width = left + size + 160.0;
  const double height = top + size + 60.0;
  const auto px = [&](double v) { return left + v * size; };
  const auto py = [&](double v) { return top + size - v * size; };

  std::ostringstream os;
  open_svg(os, width, height, title);
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    os << "<line x1=\"" << num(px(0)) << "\" x2=\"" << num(px(1)) << "\" y1=\"" << num(py(v))
       << "\" y2=\"" << num(py(v)) << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << num(px(0) - 4) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
       << num(v) << "</text>\n";
    os << "<text x=\"" << num(px(v)) << "\" y=\"" << num(py(0) + 14) << "\" text-anchor=\"middle\">"
       << num(v) << "</text>\n";
  }
  os << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(1))
     << "\" y2=\"" << num(py(1)) << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
  os << "<text x=\"" << num(px(0.5)) << "\" y=\"" << num(py(0) + 30)
     << "\" text-anchor=\"middle\">expected (uniform)</text>\n";
  os << "<text transform=\"translate(" << num(left - 40) << ',' << num(top + size / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">observed scaled residual</text>\n";

  std::vector<std::string> names;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    names.push_back(samples[s].first);
    std::vector<double> u = samples[s].second;
    std::sort(u.begin(), u.end());
    // At most ~400 points per series keeps the file small.
    const std::size_t stride = std::max<std::size_t>(1, u.size() / 400);
    os << "<g fill=\"" << kPalette[s % kPaletteSize] << "\">\n";
    for (std::size_t i = 0; i < u.size(); i += stride) {
      const double expected = (static_cast<double>(i) + 0.5) / static_cast<double>(u.size());
      os << "<circle cx=\"" << num(px(expected)) << "\" cy=\"" << num(py(u[i])) << "\" r=\"1.50\"/>\n";
    }
    os << "</g>\n";
  }
  legend(os, left + size + 20.0, top + 10.0, names);
  os << "</svg>\n";
  return os.str();
}

}  // namespace favfa::report
