#include "cotans/bei_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cotans {

void validate(const DecoderOptions& options) {
  if (options.n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }
  if (options.window < 1 || options.window % 2 == 0) {
    throw std::invalid_argument("window must be a positive odd number");
  }
}

std::vector<BoundaryDetection> find_peaks(const RhoThetaImage& image, const PeakSearch& search) {
  const GridSpec& g = image.grid;
  if (image.values.size() != g.size()) throw std::invalid_argument("image does not match its grid");
  if (search.centroid_rho < 0 || search.centroid_theta < 0 || search.suppress_rho < 0 ||
      search.suppress_theta < 0) {
    throw std::invalid_argument("peak search extents must be non-negative");
  }
  RhoThetaImage work = image;
  const auto wrap = [&](int col) { return ((col % g.n_theta) + g.n_theta) % g.n_theta; };

  struct Cell {
    double row;
    double column;
  };
  std::vector<Cell> found;
  std::vector<BoundaryDetection> detections;

  for (int iter = 0; iter < search.n_max; ++iter) {
    const auto it = std::max_element(work.values.begin(), work.values.end());
    const double peak = *it;
    if (!(peak >= search.threshold) || !(peak > 0.0)) break;
    const auto flat = static_cast<int>(it - work.values.begin());
    const int prow = flat / g.n_theta;
    const int pcol = flat % g.n_theta;

    double mass = 0.0;
    double row_sum = 0.0;
    double offset_sum = 0.0;
    for (int dr = -search.centroid_rho; dr <= search.centroid_rho; ++dr) {
      const int row = prow + dr;
      if (row < 0 || row >= g.n_rho) continue;
      for (int dt = -search.centroid_theta; dt <= search.centroid_theta; ++dt) {
        const double v = work.at(row, wrap(pcol + dt));
        if (v > 0.0) {
          mass += v;
          row_sum += v * row;
          offset_sum += v * dt;
        }
      }
    }
    for (int dr = -search.suppress_rho; dr <= search.suppress_rho; ++dr) {
      const int row = prow + dr;
      if (row < 0 || row >= g.n_rho) continue;
      for (int dt = -search.suppress_theta; dt <= search.suppress_theta; ++dt) {
        work.at(row, wrap(pcol + dt)) = 0.0;
      }
    }
    const double row = row_sum / mass;
    double column = std::fmod(pcol + offset_sum / mass, static_cast<double>(g.n_theta));
    if (column < 0.0) column += g.n_theta;

    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Cell& c) {
      double dc = std::abs(c.column - column);
      dc = std::min(dc, g.n_theta - dc);
      return std::abs(c.row - row) <= 1.0 && dc <= 1.0;
    });
    if (duplicate) continue;
    found.push_back({row, column});
    detections.push_back({Boundary{g.rho_at(row), wrap_angle(g.theta_at(column))}, peak});
  }
  return detections;
}

std::vector<BoundaryDetection> decode_bei(const RhoThetaImage& image, const DecoderOptions& options) {
  validate(options);
  const int half = options.window / 2;
  return find_peaks(image, {options.n_max, options.threshold, half, half, half, half});
}

}  // namespace cotans
