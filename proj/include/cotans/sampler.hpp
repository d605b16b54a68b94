#pragma once

#include <array>
#include <cstdint>

#include "cotans/geometry.hpp"

namespace cotans {

/// Random environments: one or two boundaries, each in a random azimuth
/// quadrant, with emitter and receivers scattered over two squares.
struct SamplerConfig {
  double rho_hi{8.0};
  /// Minimum range per quadrant (quadrant 1 first: theta in [0, 90) deg).
  std::array<double, 4> rho_min{1.0, 1.0, 3.0, 1.0};
  double theta_min_sep_deg{30.0};
  Point2 emitter_center{3.5, 0.5};
  Point2 receiver_center{-2.5, 3.5};
  double placement_width{2.0};
  int n_receivers{5};
  int n_max{2};
  double p_single{0.5};
  double sound_speed{1500.0};
  int max_draws{1000};
};

/// Throws std::invalid_argument on an inconsistent configuration.
/// grid_rho_max is the image range the boundaries must fit in.
void validate(const SamplerConfig& cfg, double grid_rho_max);

/// Quadrant (0..3) of an azimuth: 0 is [0, 90) deg, 2 is [-180, -90) deg.
int quadrant_of(double theta);

/// Draws one environment. Every device ends up strictly on the origin side
/// of every boundary. Throws std::runtime_error when max_draws candidate
/// draws are rejected.
Scenario sample_scenario(const SamplerConfig& cfg, std::uint64_t seed);

}  // namespace cotans
