#pragma once

#include <vector>

#include "provex/apt.hpp"

namespace provex {

/// Interior quantile cut points of a numeric APT column: n_fragments
/// fragments yield at most n_fragments-1 distinct boundaries. These are
/// the only constants numeric predicates may use.
std::vector<double> fragment_boundaries(const AptTable& apt, int col, int n_fragments);

}  // namespace provex
