#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "provex/pattern.hpp"
#include "provex/rng.hpp"

namespace provex {

/// Integral-coverage counts and the derived ratios. Ratios are 0 when
/// their denominator is 0 (keeps the ranking total).
struct MetricSet {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;

    static MetricSet from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);
};

/// A Bernoulli sample over PT rows. All APT extensions of a sampled PT
/// row are in the sample, so integral coverage stays well-defined.
/// Rate 1.0 keeps every row.
struct PtSample {
    double rate = 1.0;
    std::vector<std::uint8_t> keep;               // per PT row id
    std::vector<std::size_t> kept_size_of_result;

    static PtSample full(const AptTable& apt);
    static PtSample bernoulli(const AptTable& apt, double rate, Rng& rng);

    bool kept(std::int32_t pt_row) const {
        return keep.empty() || keep[static_cast<std::size_t>(pt_row)] != 0;
    }
};

/// 1 iff some extension row of (result, pt_row) matches the pattern.
int coverage(const CompiledPattern& cp, const AptTable& apt, int result, std::int32_t pt_row);

/// Covered PT rows of one result (restricted to the sample when given).
std::int64_t covered_count(const CompiledPattern& cp, const AptTable& apt, int result,
                           const PtSample* sample);

/// Two-point metrics: tp/fn over the primary tuple's provenance, fp over
/// the secondary's. `secondary == nullopt` is the single-point reduction:
/// fp sums over every other result tuple's provenance.
MetricSet metrics(const Pattern& p, const AptTable& apt, int primary,
                  std::optional<int> secondary, const PtSample* sample = nullptr);

MetricSet metrics(const CompiledPattern& cp, const AptTable& apt, int primary,
                  std::optional<int> secondary, const PtSample* sample = nullptr);

/// Recall only (cheaper pruning check during refinement).
double recall_of(const CompiledPattern& cp, const AptTable& apt, int primary,
                 const PtSample* sample = nullptr);

}  // namespace provex
