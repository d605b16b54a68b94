#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace cotans {

/// Minimum-cost matching of maximum cardinality min(rows, cols) on a dense
/// rows x cols cost matrix (row-major). Exhaustive search; intended for the
/// handful of boundaries per trial. Returns (row, col) pairs sorted by row.
std::vector<std::pair<std::size_t, std::size_t>> min_cost_assignment(
    const std::vector<double>& cost, std::size_t rows, std::size_t cols);

}  // namespace cotans
