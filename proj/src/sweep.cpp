#include "cotans/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "cotans/metrics.hpp"
#include "cotans/seeding.hpp"

namespace cotans {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_id) {
  return derive_seed(master_seed, {trial_id});
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Method>& methods,
                      const BeiProvider& provider) {
  validate(cfg);
  const std::size_t n_snr = cfg.snrs.size();
  const auto k = static_cast<std::size_t>(cfg.trials);
  SweepResult result;
  result.records.resize(methods.size() * n_snr * k);

  parallel_for(result.records.size(), cfg.threads, [&](std::size_t job) {
    const std::size_t trial = job % k;
    const std::size_t snr = (job / k) % n_snr;
    const std::size_t method = job / (k * n_snr);
    result.records[job] = run_trial(cfg, cfg.snrs[snr], trial_seed(cfg.seed, trial), methods[method],
                                    provider, trial);
  });

  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t s = 0; s < n_snr; ++s) {
      const std::span<const TrialRecord> block(result.records.data() + (m * n_snr + s) * k, k);
      SweepRow row;
      row.method = methods[m];
      row.snr_db = cfg.snrs[s];
      row.trials = k;
      for (const auto& r : block) {
        row.false_alarms += r.estimates.size() - r.matches.size();
        row.skipped_curves += r.diagnostics.skipped_curves;
        row.solver_failures += r.diagnostics.solver_failures;
        row.sage_nonconverged += r.diagnostics.sage_nonconverged;
      }
      try {
        const auto rmse = rmse_eval(block, cfg.miss_policy, cfg.miss_penalty_m);
        row.rho_rmse = rmse.rho_rmse;
        row.theta_rmse_deg = rmse.theta_rmse_deg;
        row.pairs = rmse.pairs;
        row.misses = rmse.misses;
      } catch (const std::invalid_argument&) {
        row.rho_rmse = row.theta_rmse_deg = std::numeric_limits<double>::quiet_NaN();
        for (const auto& r : block) row.misses += r.missed.size();
      }
      row.count_accuracy = count_accuracy(block);
      row.median_abs_drho = median_abs_drho(block);
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "method,snr_db,trials,matched_pairs,misses,false_alarms,rho_rmse_m,theta_rmse_deg,"
         "count_accuracy,median_abs_drho_m,skipped_curves,solver_failures,sage_nonconverged\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << num(r.snr_db) << ',' << r.trials << ',' << r.pairs << ','
        << r.misses << ',' << r.false_alarms << ',' << num(r.rho_rmse) << ','
        << num(r.theta_rmse_deg) << ',' << num(r.count_accuracy) << ',' << num(r.median_abs_drho)
        << ',' << r.skipped_curves << ',' << r.solver_failures << ',' << r.sage_nonconverged << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "method,snr_db,trial_id,seed,n_true,n_hat,truth_index,rho_true_m,theta_true_deg,"
         "rho_est_m,theta_est_deg,d_rho_m,d_theta_deg\n";
  for (const auto& r : records) {
    const auto& truth = r.scenario.boundaries;
    for (std::size_t t = 0; t < truth.size(); ++t) {
      out << to_string(r.method) << ',' << num(r.snr_db) << ',' << r.trial_id << ',' << r.seed << ','
          << truth.size() << ',' << r.n_hat << ',' << t << ',' << num(truth[t].rho) << ','
          << num(rad2deg(truth[t].theta)) << ',';
      const auto m = std::find_if(r.matches.begin(), r.matches.end(),
                                  [&](const MatchedPair& p) { return p.truth == t; });
      if (m == r.matches.end()) {
        out << ",,,\n";
        continue;
      }
      const Boundary& e = r.estimates[m->estimate];
      out << num(e.rho) << ',' << num(rad2deg(e.theta)) << ',' << num(m->d_rho) << ','
          << num(rad2deg(m->d_theta)) << '\n';
    }
  }
}

void write_rmse_svg(std::ostream& out, const std::vector<SweepRow>& rows) {
  const double w = 640, h = 420, left = 70, right = 20, top = 20, bottom = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y1 = 0.0;
  for (const auto& r : rows) {
    x0 = std::min(x0, r.snr_db);
    x1 = std::max(x1, r.snr_db);
    if (std::isfinite(r.rho_rmse)) y1 = std::max(y1, r.rho_rmse);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > 0.0)) y1 = 1.0;
  y1 *= 1.1;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - y / y1 * (h - top - bottom); };
  const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << w - right << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">SNR [dB]</text>\n"
      << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
      << ")\" text-anchor=\"middle\">range RMSE [m]</text>\n"
      << "<text x=\"" << left - 5 << "\" y=\"" << py(y1) + 4 << "\" text-anchor=\"end\">" << num(y1)
      << "</text>\n";
  for (int m = 0; m < 3; ++m) {
    std::string points;
    for (const auto& r : rows) {
      if (static_cast<int>(r.method) != m || !std::isfinite(r.rho_rmse)) continue;
      points += num(px(r.snr_db)) + "," + num(py(r.rho_rmse)) + " ";
      out << "<text x=\"" << px(r.snr_db) << "\" y=\"" << h - bottom + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << num(r.snr_db) << "</text>\n";
    }
    if (points.empty()) continue;
    out << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << colours[m] << "\" points=\""
        << points << "\"/>\n"
        << "<text x=\"" << w - right - 5 << "\" y=\"" << top + 15 * (m + 1) << "\" fill=\""
        << colours[m] << "\" text-anchor=\"end\">" << to_string(static_cast<Method>(m)) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace cotans
