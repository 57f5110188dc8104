#pragma once

#include <vector>

#include "provex/apt.hpp"

namespace provex {

/// Pairwise association between two APT columns over the given rows,
/// in [0, 1]: |Pearson r| for numeric-numeric, Cramer's V for
/// categorical-categorical, correlation ratio for mixed pairs.
/// Degenerate inputs (constants, too few rows) score 0.
double association(const AptTable& apt, int col_a, int col_b,
                   const std::vector<std::uint32_t>& rows);

/// Average-linkage agglomerative clustering over the columns: merge
/// while the best average pairwise association is >= threshold.
/// Returns one cluster id per input column, ids dense from 0.
std::vector<int> cluster_columns(const AptTable& apt, const std::vector<int>& cols,
                                 const std::vector<std::uint32_t>& rows, double threshold);

}  // namespace provex
