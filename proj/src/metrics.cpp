#include "provex/metrics.hpp"

namespace provex {

MetricSet MetricSet::from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    MetricSet m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.fscore = (m.precision > 0.0 && m.recall > 0.0)
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    return m;
}

PtSample PtSample::full(const AptTable& apt) {
    PtSample s;
    s.rate = 1.0;
    s.kept_size_of_result = apt.pt_size_of_result;
    return s;
}

PtSample PtSample::bernoulli(const AptTable& apt, double rate, Rng& rng) {
    if (rate >= 1.0) return full(apt);
    PtSample s;
    s.rate = rate;
    std::size_t n_pt_rows = 0;
    for (const auto& ids : apt.pt_rows_of_result) {
        for (const auto id : ids) n_pt_rows = std::max(n_pt_rows, static_cast<std::size_t>(id) + 1);
    }
    s.keep.assign(n_pt_rows, 0);
    s.kept_size_of_result.assign(apt.n_results, 0);
    for (std::size_t res = 0; res < apt.n_results; ++res) {
        for (const auto id : apt.pt_rows_of_result[res]) {
            if (rng.bernoulli(rate)) {
                s.keep[static_cast<std::size_t>(id)] = 1;
                ++s.kept_size_of_result[res];
            }
        }
    }
    return s;
}

int coverage(const CompiledPattern& cp, const AptTable& apt, int result, std::int32_t pt_row) {
    return cp.matches_any(apt, apt.slice(result, pt_row)) ? 1 : 0;
}

std::int64_t covered_count(const CompiledPattern& cp, const AptTable& apt, int result,
                           const PtSample* sample) {
    std::int64_t covered = 0;
    const RowRange runs = apt.run_range_of_result[result];
    for (std::uint32_t i = runs.begin; i < runs.end; ++i) {
        const AptRun& run = apt.runs[i];
        if (sample && !sample->kept(run.pt_row)) continue;
        if (cp.matches_any(apt, RowRange{run.begin, run.end})) ++covered;
    }
    return covered;
}

MetricSet metrics(const CompiledPattern& cp, const AptTable& apt, int primary,
                  std::optional<int> secondary, const PtSample* sample) {
    const std::int64_t a1 =
        sample ? static_cast<std::int64_t>(sample->kept_size_of_result[primary])
               : static_cast<std::int64_t>(apt.pt_size_of_result[primary]);
    const std::int64_t tp = covered_count(cp, apt, primary, sample);
    std::int64_t fp = 0;
    if (secondary) {
        fp = covered_count(cp, apt, *secondary, sample);
    } else {
        for (std::size_t res = 0; res < apt.n_results; ++res) {
            if (static_cast<int>(res) == primary) continue;
            fp += covered_count(cp, apt, static_cast<int>(res), sample);
        }
    }
    return MetricSet::from_counts(tp, fp, a1 - tp);
}

MetricSet metrics(const Pattern& p, const AptTable& apt, int primary,
                  std::optional<int> secondary, const PtSample* sample) {
    CompiledPattern cp(p, apt);
    return metrics(cp, apt, primary, secondary, sample);
}

double recall_of(const CompiledPattern& cp, const AptTable& apt, int primary,
                 const PtSample* sample) {
    const std::int64_t a1 =
        sample ? static_cast<std::int64_t>(sample->kept_size_of_result[primary])
               : static_cast<std::int64_t>(apt.pt_size_of_result[primary]);
    if (a1 == 0) return 0.0;
    const std::int64_t tp = covered_count(cp, apt, primary, sample);
    return static_cast<double>(tp) / static_cast<double>(a1);
}

}  // namespace provex
