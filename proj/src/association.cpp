#include "provex/association.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace provex {

namespace {

double pearson_abs(const AptTable& apt, int a, int b, const std::vector<std::uint32_t>& rows) {
    const auto& ca = apt.columns[a];
    const auto& cb = apt.columns[b];
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto r : rows) {
        if (ca.null_mask[r] || cb.null_mask[r]) continue;
        const double x = ca.nums[r], y = cb.nums[r];
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double nd = static_cast<double>(n);
    const double cov = sxy - sx * sy / nd;
    const double vx = sxx - sx * sx / nd;
    const double vy = syy - sy * sy / nd;
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return std::min(1.0, std::abs(cov) / std::sqrt(vx * vy));
}

double cramers_v(const AptTable& apt, int a, int b, const std::vector<std::uint32_t>& rows) {
    const auto& ca = apt.columns[a];
    const auto& cb = apt.columns[b];
    std::map<std::pair<std::int32_t, std::int32_t>, double> joint;
    std::unordered_map<std::int32_t, double> ma, mb;
    double n = 0;
    for (const auto r : rows) {
        if (ca.codes[r] < 0 || cb.codes[r] < 0) continue;
        joint[{ca.codes[r], cb.codes[r]}] += 1.0;
        ma[ca.codes[r]] += 1.0;
        mb[cb.codes[r]] += 1.0;
        n += 1.0;
    }
    const std::size_t ra = ma.size(), rb = mb.size();
    if (n < 2 || ra < 2 || rb < 2) return 0.0;
    double chi2 = 0.0;
    for (const auto& [cell, observed] : joint) {
        const double expected = ma[cell.first] * mb[cell.second] / n;
        const double d = observed - expected;
        chi2 += d * d / expected;
    }
    const double denom = n * static_cast<double>(std::min(ra, rb) - 1);
    return std::min(1.0, std::sqrt(chi2 / denom));
}

double correlation_ratio(const AptTable& apt, int cat, int num,
                         const std::vector<std::uint32_t>& rows) {
    const auto& cc = apt.columns[cat];
    const auto& cn = apt.columns[num];
    std::unordered_map<std::int32_t, std::pair<double, double>> group;  // sum, count
    double total_sum = 0, total_n = 0;
    for (const auto r : rows) {
        if (cc.codes[r] < 0 || cn.null_mask[r]) continue;
        auto& g = group[cc.codes[r]];
        g.first += cn.nums[r];
        g.second += 1.0;
        total_sum += cn.nums[r];
        total_n += 1.0;
    }
    if (total_n < 2 || group.size() < 2) return 0.0;
    const double mean = total_sum / total_n;
    double ss_between = 0.0;
    for (const auto& [code, g] : group) {
        const double gm = g.first / g.second;
        ss_between += g.second * (gm - mean) * (gm - mean);
    }
    double ss_total = 0.0;
    for (const auto r : rows) {
        if (cc.codes[r] < 0 || cn.null_mask[r]) continue;
        ss_total += (cn.nums[r] - mean) * (cn.nums[r] - mean);
    }
    if (ss_total <= 0.0) return 0.0;
    return std::min(1.0, std::sqrt(ss_between / ss_total));
}

}  // namespace

double association(const AptTable& apt, int col_a, int col_b,
                   const std::vector<std::uint32_t>& rows) {
    const bool a_cat = apt.columns[col_a].kind == ColumnKind::categorical;
    const bool b_cat = apt.columns[col_b].kind == ColumnKind::categorical;
    if (!a_cat && !b_cat) return pearson_abs(apt, col_a, col_b, rows);
    if (a_cat && b_cat) return cramers_v(apt, col_a, col_b, rows);
    return a_cat ? correlation_ratio(apt, col_a, col_b, rows)
                 : correlation_ratio(apt, col_b, col_a, rows);
}

std::vector<int> cluster_columns(const AptTable& apt, const std::vector<int>& cols,
                                 const std::vector<std::uint32_t>& rows, double threshold) {
    const int n = static_cast<int>(cols.size());
    std::vector<std::vector<double>> assoc(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            assoc[i][j] = assoc[j][i] = association(apt, cols[i], cols[j], rows);
        }
    }

    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) clusters.push_back({i});

    while (clusters.size() > 1) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double sum = 0.0;
                for (const int a : clusters[i]) {
                    for (const int b : clusters[j]) sum += assoc[a][b];
                }
                const double avg =
                    sum / static_cast<double>(clusters[i].size() * clusters[j].size());
                // Name-order tie break keeps the merge order deterministic.
                if (avg > best + 1e-12) {
                    best = avg;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best < threshold) break;
        auto merged = clusters[bi];
        merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(merged.begin(), merged.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
        clusters[bi] = std::move(merged);
    }

    // Dense ids in order of each cluster's smallest member.
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    std::vector<int> out(cols.size(), -1);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (const int member : clusters[c]) out[member] = static_cast<int>(c);
    }
    return out;
}

}  // namespace provex
