#include "cotans/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace cotans {

namespace {

struct Search {
  const std::vector<double>& cost;
  std::size_t rows;
  std::size_t cols;
  std::size_t target;
  std::vector<bool> col_used;
  std::vector<std::pair<std::size_t, std::size_t>> current;
  std::vector<std::pair<std::size_t, std::size_t>> best;
  double best_cost = std::numeric_limits<double>::infinity();

  void run(std::size_t row, double acc) {
    if (current.size() == target) {
      if (acc < best_cost) {
        best_cost = acc;
        best = current;
      }
      return;
    }
    if (row == rows) return;
    // Rows left cannot fill the remaining slots.
    if (rows - row < target - current.size()) return;
    for (std::size_t c = 0; c < cols; ++c) {
      if (col_used[c]) continue;
      col_used[c] = true;
      current.emplace_back(row, c);
      run(row + 1, acc + cost[row * cols + c]);
      current.pop_back();
      col_used[c] = false;
    }
    run(row + 1, acc);
  }
};

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> min_cost_assignment(
    const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  if (cost.size() != rows * cols) throw std::invalid_argument("cost matrix size mismatch");
  if (rows > 10 || cols > 10) throw std::invalid_argument("assignment limited to 10x10");
  Search s{cost, rows, cols, std::min(rows, cols), std::vector<bool>(cols, false), {}, {}};
  s.run(0, 0.0);
  return s.best;
}

}  // namespace cotans
