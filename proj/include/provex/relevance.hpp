#pragma once

#include <optional>
#include <string>
#include <vector>

#include "provex/apt.hpp"
#include "provex/rng.hpp"

namespace provex {

struct AttributeProfile {
    std::string attr;
    int column = -1;
    ColumnKind kind = ColumnKind::categorical;
    double relevance = 0.0;
    int cluster = -1;  // -1: not retained by the relevance filter
    bool representative = false;
};

struct FilteredAttrs {
    std::vector<int> numeric;      // representative columns, numeric kind
    std::vector<int> categorical;  // representative columns, categorical kind
    std::vector<AttributeProfile> profiles;
};

/// Gini importance per feature column from an ensemble of randomized
/// trees (bootstrap rows, sqrt(p) features per split, depth <= 8,
/// min leaf 5). `labels` is parallel to `rows`. Importances are
/// normalized to sum 1 when any split was informative.
std::vector<double> forest_importance(const AptTable& apt, const std::vector<int>& feature_cols,
                                      const std::vector<std::uint32_t>& rows,
                                      const std::vector<std::uint8_t>& labels, Rng& rng);

/// Attribute preprocessing for one mining task: relevance on the binary
/// "belongs to t1's extensions vs t2's" task, top `sel_attrs` retained,
/// association clustering, one representative per cluster. When the task
/// is degenerate (single label, or no informative split), all
/// non-constant attributes are retained instead. `secondary == nullopt`
/// labels rows of every other result as the negative class.
/// `feature_filter == false` keeps every eligible attribute as its own
/// representative.
FilteredAttrs filter_attrs(const AptTable& apt, int primary, std::optional<int> secondary,
                           int sel_attrs, bool feature_filter, Rng& rng);

}  // namespace provex
