#include "cotans/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cotans {

RmseResult rmse_eval(std::span<const TrialRecord> records, MissPolicy policy, double miss_penalty_m) {
  RmseResult out;
  double sum_rho = 0.0;
  double sum_theta = 0.0;
  for (const auto& r : records) {
    for (const auto& m : r.matches) {
      sum_rho += m.d_rho * m.d_rho;
      const double deg = rad2deg(m.d_theta);
      sum_theta += deg * deg;
      ++out.pairs;
    }
    out.misses += r.missed.size();
  }
  std::size_t count = out.pairs;
  if (policy == MissPolicy::Penalize) {
    sum_rho += static_cast<double>(out.misses) * miss_penalty_m * miss_penalty_m;
    sum_theta += static_cast<double>(out.misses) * 180.0 * 180.0;
    count += out.misses;
  }
  if (count == 0) throw std::invalid_argument("RMSE over zero matched pairs");
  out.rho_rmse = std::sqrt(sum_rho / static_cast<double>(count));
  out.theta_rmse_deg = std::sqrt(sum_theta / static_cast<double>(count));
  return out;
}

double count_accuracy(std::span<const TrialRecord> records) {
  if (records.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (r.n_hat == static_cast<int>(r.scenario.boundaries.size())) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

double median_abs_drho(std::span<const TrialRecord> records) {
  std::vector<double> errs;
  for (const auto& r : records) {
    for (const auto& m : r.matches) errs.push_back(std::abs(m.d_rho));
  }
  if (errs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(errs.begin(), errs.end());
  const std::size_t mid = errs.size() / 2;
  return errs.size() % 2 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
}

}  // namespace cotans
