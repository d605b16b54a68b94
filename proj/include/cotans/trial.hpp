#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cotans/acoustic_sim.hpp"
#include "cotans/bei_decoder.hpp"
#include "cotans/config.hpp"
#include "cotans/cotans_image.hpp"
#include "cotans/delay_estimation.hpp"
#include "cotans/geometry.hpp"

namespace cotans {

enum class Method { CotansClassical, CotansNn, Ls };

std::string to_string(Method m);
Method parse_method(const std::string& text);

/// Intermediate products of the estimation chain for one trial.
struct Pipeline {
  Scenario scenario;
  std::vector<ReceivedSignal> signals;
  std::vector<DelayEstimates> delays;  // all arrivals
  std::vector<DelayEstimates> nlos;    // LOS removed
  CotansImage cotans;
  int sage_nonconverged{0};
};

/// Seeds derived from a trial seed. The scenario and the noise draws do not
/// depend on the SNR, so sweeps are paired across SNR levels.
std::uint64_t scenario_seed(std::uint64_t trial_seed);
std::uint64_t noise_seed(std::uint64_t trial_seed, std::size_t receiver_index);

/// simulate -> estimate delays -> strip LOS -> COTANS image.
Pipeline run_pipeline(const ExperimentConfig& cfg, const Scenario& scenario, double snr_db,
                      std::uint64_t trial_seed);
Pipeline run_pipeline(const ExperimentConfig& cfg, double snr_db, std::uint64_t trial_seed);

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (truth, estimate)
  std::vector<std::size_t> missed_truths;
  std::vector<std::size_t> unmatched_estimates;
};

/// Minimum-cost bipartite assignment with cost
/// (d_rho / rho_max)^2 + (d_theta_wrapped / pi)^2.
Assignment match_estimates(std::span<const Boundary> truth, std::span<const Boundary> est,
                           double rho_max);

struct MatchedPair {
  std::size_t truth{0};
  std::size_t estimate{0};
  double d_rho{0.0};    // truth - estimate [m]
  double d_theta{0.0};  // wrapped truth - estimate [rad]
};

struct TrialDiagnostics {
  int skipped_curves{0};
  int solver_failures{0};
  int sage_nonconverged{0};
};

struct TrialRecord {
  std::uint64_t trial_id{0};
  std::uint64_t seed{0};
  double snr_db{0.0};
  Scenario scenario;
  Method method{Method::CotansClassical};
  std::vector<Boundary> estimates;
  int n_hat{0};
  std::vector<MatchedPair> matches;
  std::vector<std::size_t> missed;  // truth indices without an estimate
  TrialDiagnostics diagnostics;
};

/// Identifies the trial whose COTANS image a BeiProvider is asked to map.
struct TrialContext {
  std::uint64_t trial_id{0};
  std::uint64_t seed{0};
  double snr_db{0.0};
};

/// Maps a COTANS image to a predicted BEI (the network step of the nn method).
using BeiProvider = std::function<RhoThetaImage(const CotansImage&, const TrialContext&)>;

/// Reads `<dir>/<snr label>/<trial id>.pred.f32`.
BeiProvider file_bei_provider(const std::string& dir, const GridSpec& grid);

/// Ground-truth BEI of the trial's scenario; stands in for a perfect network.
BeiProvider oracle_bei_provider(const ExperimentConfig& cfg);

/// Zero-padded six-digit trial id used in file names.
std::string trial_stem(std::uint64_t trial_id);
std::string snr_label(double snr_db);

/// One full trial. The nn method needs a provider; std::invalid_argument
/// otherwise.
TrialRecord run_trial(const ExperimentConfig& cfg, double snr_db, std::uint64_t seed, Method method,
                      const BeiProvider& provider = {}, std::uint64_t trial_id = 0);

/// Fills estimates, n_hat, matches and misses from a list of estimates.
void score_trial(TrialRecord& record, std::span<const Boundary> estimates, double rho_max);

}  // namespace cotans
