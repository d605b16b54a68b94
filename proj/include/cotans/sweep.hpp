#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "cotans/config.hpp"
#include "cotans/trial.hpp"

namespace cotans {

struct SweepRow {
  Method method{Method::CotansClassical};
  double snr_db{0.0};
  std::size_t trials{0};
  std::size_t pairs{0};
  std::size_t misses{0};
  std::size_t false_alarms{0};
  double rho_rmse{0.0};
  double theta_rmse_deg{0.0};
  double count_accuracy{0.0};
  double median_abs_drho{0.0};
  int skipped_curves{0};
  int solver_failures{0};
  int sage_nonconverged{0};
};

struct SweepResult {
  std::vector<SweepRow> rows;          // methods x SNRs, method-major
  std::vector<TrialRecord> records;    // same order, trials innermost
};

/// Seed of trial k under a master seed; shared across SNRs and methods.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_id);

/// Runs cfg.trials trials per (method, SNR) on a worker pool. Results are
/// independent of thread count and scheduling.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Method>& methods,
                      const BeiProvider& provider = {});

/// Runs fn(i) for i in [0, n) on `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Line chart of rho_rmse vs SNR, one polyline per method.
void write_rmse_svg(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace cotans
