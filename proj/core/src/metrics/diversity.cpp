#include "favfa/metrics/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "favfa/error.hpp"

namespace favfa::metrics {

double diversity(std::span<const double> frequencies, std::size_t n_categories) {
  if (n_categories < 2) {
    throw Error(ErrorCode::kDegenerateSupport, "diversity needs at least two categories");
  }
  if (frequencies.size() > n_categories) {
    throw Error(ErrorCode::kPreconditionViolation, "more frequencies than categories");
  }
  double total = 0.0;
  std::size_t nonzero = 0;
  for (double f : frequencies) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw Error(ErrorCode::kPreconditionViolation, "frequencies must be finite and nonnegative");
    }
    total += f;
    nonzero += f > 0.0 ? 1 : 0;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kPreconditionViolation, "frequencies must have a positive sum");
  }
  if (nonzero == 1) return 0.0;
  if (nonzero == n_categories) {
    const double first = *std::find_if(frequencies.begin(), frequencies.end(),
                                       [](double f) { return f > 0.0; });
    if (std::all_of(frequencies.begin(), frequencies.end(), [&](double f) { return f == first; })) {
      return 1.0;
    }
  }
  // Sorted summation makes the result exactly permutation-invariant.
  std::vector<double> sorted(frequencies.begin(), frequencies.end());
  std::sort(sorted.begin(), sorted.end());
  total = 0.0;
  for (double f : sorted) total += f;
  double entropy = 0.0;
  for (double f : sorted) {
    if (f > 0.0) {
      const double p = f / total;
      entropy -= p * std::log(p);
    }
  }
  return std::clamp(entropy / std::log(static_cast<double>(n_categories)), 0.0, 1.0);
}

double diversity_of(std::span<const std::string> observed,
                    std::span<const std::string> categories) {
  std::map<std::string, double, std::less<>> counts;
  for (const auto& c : categories) counts[c] = 0.0;
  for (const auto& o : observed) {
    auto it = counts.find(o);
    if (it == counts.end()) {
      throw Error(ErrorCode::kPreconditionViolation, "label '" + o + "' is not a declared category");
    }
    it->second += 1.0;
  }
  std::vector<double> freq;
  for (const auto& c : categories) freq.push_back(counts[c]);
  return diversity(freq, categories.size());
}

}  // namespace favfa::metrics
