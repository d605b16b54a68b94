#pragma once

#include <cstddef>
#include <span>

#include "cotans/config.hpp"
#include "cotans/trial.hpp"

namespace cotans {

struct RmseResult {
  double rho_rmse{0.0};        // meters
  double theta_rmse_deg{0.0};  // degrees, wrapped differences
  std::size_t pairs{0};
  std::size_t misses{0};
};

/// Range and azimuth RMSE over every matched (truth, estimate) pair of the
/// records: sqrt(sum d_rho^2 / count). Under MissPolicy::Penalize each miss
/// is added as an error of `miss_penalty_m` and 180 deg. Throws
/// std::invalid_argument when there is nothing to average.
RmseResult rmse_eval(std::span<const TrialRecord> records, MissPolicy policy = MissPolicy::Exclude,
                     double miss_penalty_m = 0.0);

/// Fraction of records with n_hat equal to the true boundary count; 0 for
/// no records.
double count_accuracy(std::span<const TrialRecord> records);

/// Median |d_rho| over matched pairs; NaN when there are none.
double median_abs_drho(std::span<const TrialRecord> records);

}  // namespace cotans
