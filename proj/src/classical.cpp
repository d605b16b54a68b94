#include "cotans/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace cotans {

namespace {

std::vector<Ellipse> curves_of(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                               int& skipped) {
  std::vector<Ellipse> out;
  for (const auto& est : nlos) {
    const Point2& r = array.receivers.at(est.receiver_index);
    for (double tau : est.taus) {
      const Ellipse e{array.emitter, r, tau * array.sound_speed};
      if (!(tau > 0.0) || !is_valid(e)) {
        ++skipped;
        continue;
      }
      out.push_back(e);
    }
  }
  return out;
}

// Azimuth within +-half_width of `theta` where the selected curves have the
// smallest spread in range; returns the refined boundary.
Boundary polish(const std::vector<const Ellipse*>& curves, Boundary start, double half_width) {
  auto spread = [&](double theta, double& mean) {
    double s = 0.0, s2 = 0.0;
    for (const Ellipse* e : curves) {
      const double r = support_rho(*e, theta);
      s += r;
      s2 += r * r;
    }
    mean = s / curves.size();
    return s2 / curves.size() - mean * mean;
  };
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = start.theta - half_width;
  double hi = start.theta + half_width;
  double mean = 0.0;
  for (int it = 0; it < 40; ++it) {
    const double a = hi - golden * (hi - lo);
    const double b = lo + golden * (hi - lo);
    if (spread(a, mean) < spread(b, mean)) hi = b;
    else lo = a;
  }
  const double theta = 0.5 * (lo + hi);
  spread(theta, mean);
  return {mean, wrap_angle(theta)};
}

}  // namespace

void validate(const ClassicalOptions& options) {
  if (options.upsample < 1 || options.upsample > 16) {
    throw std::invalid_argument("classical_upsample must lie in [1, 16]");
  }
  if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
    throw std::invalid_argument("classical_threshold must lie in (0, 1]");
  }
  if (!(options.suppress_theta_deg >= 0.0 && options.suppress_theta_deg < 180.0)) {
    throw std::invalid_argument("classical_suppress_deg must lie in [0, 180)");
  }
  if (!(options.vote_sigma > 0.0 && options.vote_sigma <= 4.0)) {
    throw std::invalid_argument("classical_vote_sigma must lie in (0, 4]");
  }
}

GridSpec upsampled_grid(const GridSpec& grid, int upsample) {
  return {grid.rho_max, (grid.n_rho - 1) * upsample + 1, grid.n_theta * upsample};
}

CotansImage accumulate_soft(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                            const GridSpec& fine, double sigma_cells) {
  validate(fine);
  CotansImage out{RhoThetaImage(fine), 0, 0};
  const auto curves = curves_of(array, nlos, out.curves_skipped);
  const double inv = 1.0 / (2.0 * sigma_cells * sigma_cells);
  const double scale = (fine.n_rho - 1) / fine.rho_max;
  const double half = 0.5 * fine.delta_theta();
  for (const auto& e : curves) {
    for (int j = 0; j < fine.n_theta; ++j) {
      const double theta = fine.theta_at(j);
      const double rho = support_rho(e, theta);
      if (!(rho >= 0.0 && rho <= fine.rho_max)) continue;
      const double x = rho * scale;
      // Votes fall off with the perpendicular distance, in cells, to the
      // locally straight curve, so steep curves are not undersampled.
      const double k = (support_rho(e, theta + half) - support_rho(e, theta - half)) * scale;
      const double stretch = 1.0 + k * k;
      const int reach = static_cast<int>(std::ceil(4.0 * sigma_cells * std::sqrt(stretch)));
      const int centre = static_cast<int>(std::floor(x + 0.5));
      for (int r = std::max(0, centre - reach); r <= std::min(fine.n_rho - 1, centre + reach); ++r) {
        out.image.at(r, j) += std::exp(-(x - r) * (x - r) * inv / stretch);
      }
    }
    ++out.curves_drawn;
  }
  return out;
}

std::vector<BoundaryDetection> decode_classical(const ArrayGeometry& array,
                                                std::span<const DelayEstimates> nlos,
                                                const GridSpec& grid,
                                                const DecoderOptions& decoder,
                                                const ClassicalOptions& options) {
  validate(decoder);
  validate(options);
  const GridSpec fine = upsampled_grid(grid, options.upsample);
  CotansImage votes = accumulate_soft(array, nlos, fine, options.vote_sigma);
  const double peak = votes.image.max();
  if (!(peak > 0.0)) return {};
  for (auto& v : votes.image.values) v /= peak;

  const int rows = (decoder.window / 2) * options.upsample;
  const int band = static_cast<int>(std::lround(deg2rad(options.suppress_theta_deg) / fine.delta_theta()));
  auto detections = find_peaks(votes.image, {decoder.n_max, options.threshold, 0, 0, rows, band});
  if (!options.refine) return detections;

  int skipped = 0;
  const auto curves = curves_of(array, nlos, skipped);
  for (auto& d : detections) {
    std::vector<const Ellipse*> through;
    for (const auto& e : curves) {
      if (std::abs(support_rho(e, d.boundary.theta) - d.boundary.rho) <= 1.5 * fine.delta_rho()) {
        through.push_back(&e);
      }
    }
    if (through.size() >= 3) d.boundary = polish(through, d.boundary, fine.delta_theta());
  }
  return detections;
}

}  // namespace cotans
