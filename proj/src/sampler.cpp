#include "cotans/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cotans {

void validate(const SamplerConfig& cfg, double grid_rho_max) {
  if (!(cfg.rho_hi > 0.0 && cfg.rho_hi <= grid_rho_max)) {
    throw std::invalid_argument("rho_hi must lie in (0, grid rho_max]");
  }
  for (double m : cfg.rho_min) {
    if (!(m >= 0.0 && m < cfg.rho_hi)) throw std::invalid_argument("rho_min must lie in [0, rho_hi)");
  }
  if (!(cfg.theta_min_sep_deg > 0.0 && cfg.theta_min_sep_deg < 180.0)) {
    throw std::invalid_argument("theta_min_sep_deg must lie in (0, 180)");
  }
  if (cfg.n_receivers < 3) throw std::invalid_argument("need at least 3 receivers");
  if (cfg.n_max < 1 || cfg.n_max > 2) throw std::invalid_argument("n_max must be 1 or 2");
  if (!(cfg.p_single >= 0.0 && cfg.p_single <= 1.0)) throw std::invalid_argument("p_single must be a probability");
  if (!(cfg.placement_width >= 0.0)) throw std::invalid_argument("placement_width must be >= 0");
  if (!(cfg.sound_speed > 0.0)) throw std::invalid_argument("sound_speed must be positive");
  if (cfg.max_draws < 1) throw std::invalid_argument("max_draws must be positive");
}

int quadrant_of(double theta) {
  double deg = rad2deg(wrap_angle(theta));
  if (deg < 0.0) deg += 360.0;
  return std::min(3, static_cast<int>(deg / 90.0));
}

Scenario sample_scenario(const SamplerConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = (cfg.n_max == 1 || unit(rng) < cfg.p_single) ? 1 : 2;
  const double min_sep = deg2rad(cfg.theta_min_sep_deg);
  const double half = 0.5 * cfg.placement_width;

  auto scatter = [&](const Point2& centre) {
    return Point2{centre.x + (unit(rng) - 0.5) * 2.0 * half,
                  centre.y + (unit(rng) - 0.5) * 2.0 * half};
  };

  // The count and the quadrants are drawn once so that rejection cannot skew
  // their frequencies; only the positions inside them are redrawn.
  std::array<int, 4> quadrants{0, 1, 2, 3};
  std::shuffle(quadrants.begin(), quadrants.end(), rng);

  for (int draw = 0; draw < cfg.max_draws; ++draw) {
    Scenario s;
    s.sound_speed = cfg.sound_speed;
    for (int j = 0; j < n; ++j) {
      const int q = quadrants[j];
      const double theta = wrap_angle(deg2rad(90.0 * (q + unit(rng))));
      const double rho = cfg.rho_min[q] + unit(rng) * (cfg.rho_hi - cfg.rho_min[q]);
      s.boundaries.push_back({rho, theta});
    }
    if (n == 2) {
      const double gap = std::abs(wrap_angle(s.boundaries[0].theta - s.boundaries[1].theta));
      if (gap < min_sep) continue;
    }
    s.emitter = scatter(cfg.emitter_center);
    for (int i = 0; i < cfg.n_receivers; ++i) s.receivers.push_back(scatter(cfg.receiver_center));

    const bool origin_side = std::all_of(s.boundaries.begin(), s.boundaries.end(), [&](const Boundary& b) {
      if (!(signed_distance(s.emitter, b) < 0.0)) return false;
      return std::all_of(s.receivers.begin(), s.receivers.end(),
                         [&](const Point2& r) { return signed_distance(r, b) < 0.0; });
    });
    if (!origin_side) continue;
    bool distinct = true;
    for (std::size_t a = 0; a < s.receivers.size(); ++a) {
      for (std::size_t b = a + 1; b < s.receivers.size(); ++b) {
        distinct = distinct && !(s.receivers[a] == s.receivers[b]);
      }
    }
    if (!distinct) continue;
    return s;
  }
  throw std::runtime_error("scenario sampler exhausted its rejection budget");
}

}  // namespace cotans
