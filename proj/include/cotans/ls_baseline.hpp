#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cotans/delay_estimation.hpp"
#include "cotans/geometry.hpp"

namespace cotans {

/// Echo path lengths attributed to one boundary, one per receiver.
struct LabeledEchoSet {
  std::size_t boundary_index{0};
  std::vector<std::pair<std::size_t, double>> distances;  // (receiver, meters)
};

struct LsOptions {
  int max_iters{50};
  double step_tol{1e-9};  // meters
};

struct LsSolution {
  Point2 position;
  double cost{0.0};  // sum of squared range residuals
  int iterations{0};
};

class LsFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Range-residual multilateration of a virtual emitter by damped
/// Gauss-Newton: minimizes sum_i (|v - r_i| - d_i)^2 from `init`.
/// Throws LsFailure on singular normal equations and std::invalid_argument
/// for fewer than three distances.
LsSolution ls_virtual_emitter(std::span<const Point2> receivers, const LabeledEchoSet& echoes,
                              const Point2& init, const LsOptions& options = {});

/// True NLOS path lengths plus N(0, sigma^2) errors, labeled by boundary.
std::vector<LabeledEchoSet> gaussian_echoes(const Scenario& scenario, double sigma,
                                            std::uint64_t seed);

/// Oracle labeling of estimated NLOS delays: per receiver, each true
/// boundary takes the estimate whose path length c * tau is closest to its
/// geometric NLOS distance (one estimate per boundary).
std::vector<LabeledEchoSet> label_echoes(const Scenario& scenario,
                                         std::span<const DelayEstimates> nlos);

/// One LS solve per boundary, initialized at the true virtual emitter.
/// Entries are empty where the solver failed or fewer than three receivers
/// carried an echo for that boundary.
std::vector<std::optional<Boundary>> ls_boundaries(const Scenario& scenario,
                                                   std::span<const LabeledEchoSet> echoes,
                                                   const LsOptions& options = {});

}  // namespace cotans
