#include "provex/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "provex/association.hpp"

namespace provex {

namespace {

constexpr int kTrees = 50;
constexpr int kMaxDepth = 8;
constexpr int kMinLeaf = 5;
constexpr int kMaxCandidates = 15;
constexpr std::size_t kCandidateProbe = 256;
constexpr double kClusterThreshold = 0.7;

struct TreeTask {
    const AptTable* apt;
    const std::vector<int>* features;
    const std::vector<std::uint32_t>* rows;    // APT row per sample
    const std::vector<std::uint8_t>* labels;   // per sample
    double root_size;
    std::vector<double>* importance;           // per feature index
};

double gini(double pos, double n) {
    if (n <= 0.0) return 0.0;
    const double p = pos / n;
    return 2.0 * p * (1.0 - p);
}

struct Split {
    int feature = -1;   // index into task.features
    bool categorical = false;
    std::int32_t code = -1;
    double threshold = 0.0;
    double decrease = 0.0;
};

/// Left branch: categorical code == split.code, or numeric value <=
/// split.threshold. Nulls go right.
bool goes_left(const AptTable& apt, int col, std::uint32_t row, const Split& s) {
    const auto& c = apt.columns[col];
    if (s.categorical) return c.codes[row] >= 0 && c.codes[row] == s.code;
    return !c.null_mask[row] && c.nums[row] <= s.threshold;
}

void grow(const TreeTask& task, std::vector<std::uint32_t>& samples, int depth, Rng& rng) {
    const std::size_t n = samples.size();
    if (depth >= kMaxDepth || n < 2 * kMinLeaf) return;
    double pos = 0;
    for (const auto s : samples) pos += (*task.labels)[s];
    if (pos == 0 || pos == static_cast<double>(n)) return;

    // sqrt(p) features per split, sampled without replacement.
    const int p = static_cast<int>(task.features->size());
    const int n_try = std::max(1, static_cast<int>(std::lround(std::sqrt(p))));
    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i;
    for (int i = 0; i < n_try; ++i) {
        const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p - i)));
        std::swap(order[i], order[j]);
    }

    const double node_gini = gini(pos, static_cast<double>(n));
    Split best;
    for (int fi = 0; fi < n_try; ++fi) {
        const int feature = order[fi];
        const int col = (*task.features)[feature];
        const auto& column = task.apt->columns[col];
        const bool categorical = column.kind == ColumnKind::categorical;

        // Candidate values come from a bounded probe of the node rows; the
        // split statistics are then collected in one pass.
        if (categorical) {
            std::unordered_map<std::int32_t, int> freq;
            const std::size_t step = std::max<std::size_t>(1, n / kCandidateProbe);
            for (std::size_t i = 0; i < n; i += step) {
                const std::int32_t code = column.codes[(*task.rows)[samples[i]]];
                if (code >= 0) ++freq[code];
            }
            std::vector<std::pair<int, std::int32_t>> ranked;
            for (const auto& [code, f] : freq) ranked.emplace_back(-f, code);
            std::sort(ranked.begin(), ranked.end());
            const std::size_t take = std::min<std::size_t>(kMaxCandidates, ranked.size());
            std::unordered_map<std::int32_t, std::pair<double, double>> stats;  // n, pos
            for (std::size_t i = 0; i < take; ++i) stats.emplace(ranked[i].second,
                                                                 std::make_pair(0.0, 0.0));
            for (const auto s : samples) {
                const std::int32_t code = column.codes[(*task.rows)[s]];
                if (code < 0) continue;
                auto it = stats.find(code);
                if (it == stats.end()) continue;
                it->second.first += 1.0;
                it->second.second += (*task.labels)[s];
            }
            for (std::size_t i = 0; i < take; ++i) {
                const auto& [nl, posl] = stats[ranked[i].second];
                const double nr = static_cast<double>(n) - nl;
                if (nl < kMinLeaf || nr < kMinLeaf) continue;
                const double child = (nl * gini(posl, nl) + nr * gini(pos - posl, nr)) /
                                     static_cast<double>(n);
                const double decrease = node_gini - child;
                if (decrease > best.decrease) {
                    best = Split{feature, true, ranked[i].second, 0.0, decrease};
                }
            }
        } else {
            std::vector<double> probe;
            const std::size_t step = std::max<std::size_t>(1, n / kCandidateProbe);
            for (std::size_t i = 0; i < n; i += step) {
                const auto row = (*task.rows)[samples[i]];
                if (!column.null_mask[row]) probe.push_back(column.nums[row]);
            }
            std::sort(probe.begin(), probe.end());
            probe.erase(std::unique(probe.begin(), probe.end()), probe.end());
            if (probe.size() < 2) continue;
            std::vector<double> thresholds;
            const std::size_t take = std::min<std::size_t>(kMaxCandidates, probe.size() - 1);
            for (std::size_t i = 1; i <= take; ++i) {
                const std::size_t idx = (i * (probe.size() - 1)) / (take + 1);
                const double t = probe[std::min(idx, probe.size() - 2)];
                if (thresholds.empty() || thresholds.back() != t) thresholds.push_back(t);
            }
            // Histogram over buckets bounded by the thresholds.
            std::vector<double> bucket_n(thresholds.size() + 1, 0.0);
            std::vector<double> bucket_pos(thresholds.size() + 1, 0.0);
            double null_n = 0.0, null_pos = 0.0;
            for (const auto s : samples) {
                const auto row = (*task.rows)[s];
                if (column.null_mask[row]) {
                    null_n += 1.0;
                    null_pos += (*task.labels)[s];
                    continue;
                }
                const auto bucket = static_cast<std::size_t>(
                    std::upper_bound(thresholds.begin(), thresholds.end(),
                                     column.nums[row]) -
                    thresholds.begin());
                bucket_n[bucket] += 1.0;
                bucket_pos[bucket] += (*task.labels)[s];
            }
            double nl = 0.0, posl = 0.0;
            for (std::size_t i = 0; i < thresholds.size(); ++i) {
                nl += bucket_n[i];
                posl += bucket_pos[i];
                const double nr = static_cast<double>(n) - nl;  // nulls stay right
                if (nl < kMinLeaf || nr < kMinLeaf) continue;
                const double child = (nl * gini(posl, nl) + nr * gini(pos - posl, nr)) /
                                     static_cast<double>(n);
                const double decrease = node_gini - child;
                if (decrease > best.decrease) {
                    best = Split{feature, false, -1, thresholds[i], decrease};
                }
            }
        }
    }

    if (best.feature < 0 || best.decrease <= 0.0) return;
    (*task.importance)[best.feature] +=
        best.decrease * (static_cast<double>(n) / task.root_size);

    const int col = (*task.features)[best.feature];
    std::vector<std::uint32_t> left, right;
    for (const auto s : samples) {
        if (goes_left(*task.apt, col, (*task.rows)[s], best)) left.push_back(s);
        else right.push_back(s);
    }
    samples.clear();
    grow(task, left, depth + 1, rng);
    grow(task, right, depth + 1, rng);
}

}  // namespace

std::vector<double> forest_importance(const AptTable& apt, const std::vector<int>& feature_cols,
                                      const std::vector<std::uint32_t>& rows,
                                      const std::vector<std::uint8_t>& labels, Rng& rng) {
    std::vector<double> importance(feature_cols.size(), 0.0);
    if (rows.empty() || feature_cols.empty()) return importance;

    TreeTask task;
    task.apt = &apt;
    task.features = &feature_cols;
    task.rows = &rows;
    task.labels = &labels;
    task.importance = &importance;

    const std::size_t n = rows.size();
    for (int t = 0; t < kTrees; ++t) {
        std::vector<std::uint32_t> bootstrap(n);
        for (std::size_t i = 0; i < n; ++i) {
            bootstrap[i] = static_cast<std::uint32_t>(rng.next_below(n));
        }
        task.root_size = static_cast<double>(n);
        grow(task, bootstrap, 0, rng);
    }

    double total = 0.0;
    for (const double v : importance) total += v;
    if (total > 0.0) {
        for (auto& v : importance) v /= total;
    }
    return importance;
}

namespace {

bool column_constant(const AptTable& apt, int col, const std::vector<std::uint32_t>& rows) {
    const auto& c = apt.columns[col];
    bool seen = false;
    std::int32_t code = -1;
    double num = 0.0;
    for (const auto r : rows) {
        if (c.kind == ColumnKind::categorical) {
            if (c.codes[r] < 0) continue;
            if (!seen) {
                code = c.codes[r];
                seen = true;
            } else if (c.codes[r] != code) {
                return false;
            }
        } else {
            if (c.null_mask[r]) continue;
            if (!seen) {
                num = c.nums[r];
                seen = true;
            } else if (c.nums[r] != num) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

FilteredAttrs filter_attrs(const AptTable& apt, int primary, std::optional<int> secondary,
                           int sel_attrs, bool feature_filter, Rng& rng) {
    FilteredAttrs out;

    std::vector<int> eligible;
    for (int c = 0; c < static_cast<int>(apt.columns.size()); ++c) {
        if (!apt.columns[c].group_by) eligible.push_back(c);
    }

    // Task rows: primary slice labeled 1, comparison rows labeled 0.
    std::vector<std::uint32_t> rows;
    std::vector<std::uint8_t> labels;
    const RowRange prim = apt.slice(primary);
    for (std::uint32_t r = prim.begin; r < prim.end; ++r) {
        rows.push_back(r);
        labels.push_back(1);
    }
    if (secondary) {
        const RowRange sec = apt.slice(*secondary);
        for (std::uint32_t r = sec.begin; r < sec.end; ++r) {
            rows.push_back(r);
            labels.push_back(0);
        }
    } else {
        for (std::size_t res = 0; res < apt.n_results; ++res) {
            if (static_cast<int>(res) == primary) continue;
            const RowRange rr = apt.slice(static_cast<int>(res));
            for (std::uint32_t r = rr.begin; r < rr.end; ++r) {
                rows.push_back(r);
                labels.push_back(0);
            }
        }
    }

    bool single_label = true;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i] != labels[0]) {
            single_label = false;
            break;
        }
    }
    if (labels.empty()) single_label = true;

    std::vector<double> relevance(eligible.size(), 0.0);
    std::vector<int> retained;  // indices into `eligible`

    if (!feature_filter) {
        for (int i = 0; i < static_cast<int>(eligible.size()); ++i) retained.push_back(i);
    } else {
        bool degenerate = single_label;
        if (!degenerate) {
            relevance = forest_importance(apt, eligible, rows, labels, rng);
            double total = 0.0;
            for (const double v : relevance) total += v;
            degenerate = total <= 0.0;
        }
        if (degenerate) {
            for (int i = 0; i < static_cast<int>(eligible.size()); ++i) {
                if (!column_constant(apt, eligible[i], rows)) retained.push_back(i);
            }
        } else {
            std::vector<int> order;
            for (int i = 0; i < static_cast<int>(eligible.size()); ++i) {
                if (relevance[i] > 0.0) order.push_back(i);
            }
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (relevance[a] != relevance[b]) return relevance[a] > relevance[b];
                return apt.columns[eligible[a]].name < apt.columns[eligible[b]].name;
            });
            if (static_cast<int>(order.size()) > sel_attrs) order.resize(sel_attrs);
            retained = std::move(order);
            std::sort(retained.begin(), retained.end());
        }
    }

    // Cluster the retained attributes and pick one representative each:
    // highest relevance, name order on ties.
    std::vector<int> retained_cols;
    for (const int i : retained) retained_cols.push_back(eligible[i]);
    std::vector<int> cluster_ids;
    if (feature_filter) {
        cluster_ids = cluster_columns(apt, retained_cols, rows, kClusterThreshold);
    } else {
        cluster_ids.resize(retained_cols.size());
        for (std::size_t i = 0; i < cluster_ids.size(); ++i) {
            cluster_ids[i] = static_cast<int>(i);
        }
    }

    int n_clusters = 0;
    for (const int c : cluster_ids) n_clusters = std::max(n_clusters, c + 1);
    std::vector<int> rep_of_cluster(n_clusters, -1);  // index into retained
    for (std::size_t i = 0; i < retained.size(); ++i) {
        const int c = cluster_ids[i];
        if (rep_of_cluster[c] < 0) {
            rep_of_cluster[c] = static_cast<int>(i);
            continue;
        }
        const int cur = rep_of_cluster[c];
        const double ri = relevance[retained[i]];
        const double rc = relevance[retained[cur]];
        if (ri > rc || (ri == rc && apt.columns[retained_cols[i]].name <
                                        apt.columns[retained_cols[cur]].name)) {
            rep_of_cluster[c] = static_cast<int>(i);
        }
    }

    std::unordered_set<int> representatives;
    for (const int r : rep_of_cluster) {
        if (r >= 0) representatives.insert(r);
    }

    for (int i = 0; i < static_cast<int>(eligible.size()); ++i) {
        AttributeProfile prof;
        prof.attr = apt.columns[eligible[i]].name;
        prof.column = eligible[i];
        prof.kind = apt.columns[eligible[i]].kind;
        prof.relevance = relevance[i];
        out.profiles.push_back(prof);
    }
    for (std::size_t i = 0; i < retained.size(); ++i) {
        auto& prof = out.profiles[retained[i]];
        prof.cluster = cluster_ids[i];
        prof.representative = representatives.count(static_cast<int>(i)) > 0;
        if (prof.representative) {
            if (prof.kind == ColumnKind::numeric) out.numeric.push_back(retained_cols[i]);
            else out.categorical.push_back(retained_cols[i]);
        }
    }
    std::sort(out.numeric.begin(), out.numeric.end());
    std::sort(out.categorical.begin(), out.categorical.end());
    return out;
}

}  // namespace provex
