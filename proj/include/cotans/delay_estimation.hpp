#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cotans/acoustic_sim.hpp"
#include "cotans/geometry.hpp"

namespace cotans {

/// Unlabeled arrival times at one receiver, ascending.
struct DelayEstimates {
  std::size_t receiver_index{0};
  std::vector<double> taus;        // seconds
  std::vector<double> amplitudes;  // parallel to taus
  bool converged{true};
  int iterations{0};
};

/// Valid-lag cross-correlation: c[k] = sum_i x[k + i] * pulse[i].
/// Throws std::invalid_argument when x is shorter than the pulse.
std::vector<double> cross_correlate(std::span<const double> x, std::span<const double> pulse);

/// Full width, in samples, of the autocorrelation envelope main lobe at -3 dB.
double mainlobe_width(std::span<const double> pulse);

/// Matched filter: the n_paths strongest correlation magnitudes, each
/// excluding +-min_sep around already accepted peaks, with 3-point parabolic
/// sub-sample refinement. Fewer estimates are returned only if the record
/// runs out of admissible lags.
DelayEstimates mf_delays(const ReceivedSignal& signal, std::span<const double> pulse,
                         std::size_t n_paths, double min_sep_seconds);

struct SageOptions {
  int max_iters{20};
  double tol_samples{0.05};
  /// Exclusion half-width in samples; <= 0 selects mainlobe_width(pulse).
  double min_sep_samples{0.0};
};

/// Squared norm of y - sum_k a_k pulse(t - tau_k), one entry after the
/// successive-cancellation start and one per full SAGE cycle.
struct SageTrace {
  std::vector<double> residual_energy;
};

/// SAGE multipath delay estimation. Starts from successive interference
/// cancellation, then cycles over paths re-fitting each one against the
/// residual of all others. A path update is kept only if it does not raise
/// the residual energy. Hitting max_iters sets converged = false.
DelayEstimates sage_delays(const ReceivedSignal& signal, std::span<const double> pulse,
                           std::size_t n_paths, const SageOptions& options = {},
                           SageTrace* trace = nullptr);

/// Drops the estimate closest to the geometric LOS delay of the receiver.
DelayEstimates strip_los(const DelayEstimates& est, const Scenario& scenario,
                         std::size_t receiver_index);

}  // namespace cotans
