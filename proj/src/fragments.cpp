#include "provex/fragments.hpp"

#include <algorithm>

namespace provex {

std::vector<double> fragment_boundaries(const AptTable& apt, int col, int n_fragments) {
    const auto& c = apt.columns[col];
    std::vector<double> values;
    values.reserve(apt.n_rows);
    for (std::uint32_t r = 0; r < apt.n_rows; ++r) {
        if (!c.null_mask[r]) values.push_back(c.nums[r]);
    }
    std::sort(values.begin(), values.end());

    std::vector<double> out;
    if (values.empty() || n_fragments < 2) return out;
    const std::size_t n = values.size();
    for (int i = 1; i < n_fragments; ++i) {
        std::size_t idx = (static_cast<std::size_t>(i) * n) / static_cast<std::size_t>(n_fragments);
        if (idx >= n) idx = n - 1;
        const double b = values[idx];
        if (out.empty() || out.back() != b) out.push_back(b);
    }
    return out;
}

}  // namespace provex
