#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace favfa::metrics {

/// Normalized Shannon entropy of a frequency table:
///   -(1 / ln n) * sum_i p_i ln p_i,  0 ln 0 := 0.
/// `frequencies` may be raw counts; they are normalized by their sum and
/// may list fewer than `n_categories` entries (the rest are zero).
/// Returns exactly 1 for a uniform table over all categories and exactly 0
/// for a point mass. Throws DegenerateSupport when n_categories < 2.
double diversity(std::span<const double> frequencies, std::size_t n_categories);

/// Diversity of observed labels over the declared category list.
double diversity_of(std::span<const std::string> observed, std::span<const std::string> categories);

}  // namespace favfa::metrics
