#pragma once

#include <span>
#include <vector>

#include "cotans/bei_decoder.hpp"
#include "cotans/cotans_image.hpp"
#include "cotans/delay_estimation.hpp"

namespace cotans {

/// Peak picking straight on the curve accumulator, without a network.
///
/// Curves from a compact receiver cluster stay within one cell of each other
/// along a long arc around the true intersection, so at image resolution the
/// true cell ties with a ridge of ghosts. The classical decoder therefore
/// votes on a grid `upsample` times finer in both axes, weights each vote by
/// the curve's sub-cell distance, and finally polishes every peak to the
/// azimuth where the curves through it agree best.
struct ClassicalOptions {
  int upsample{8};
  double threshold{0.7};            // fraction of the strongest cell
  double suppress_theta_deg{15.0};  // half-width of the azimuth band cleared per detection
  double vote_sigma{0.5};           // Gaussian vote spread [fine cells]
  bool refine{true};
};

void validate(const ClassicalOptions& options);

/// Fine grid used for voting: same extent, `upsample` times more cells per
/// axis (rho keeps both end points).
GridSpec upsampled_grid(const GridSpec& grid, int upsample);

/// Vote image on `fine`: each curve adds exp(-d^2 / 2 sigma^2) to the rows
/// around its range in every column, d in cells. Not normalized.
CotansImage accumulate_soft(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                            const GridSpec& fine, double sigma_cells);

/// Detections in physical units. `decoder` supplies n_max and the window
/// (in image cells) that bounds the range suppression.
std::vector<BoundaryDetection> decode_classical(const ArrayGeometry& array,
                                                std::span<const DelayEstimates> nlos,
                                                const GridSpec& grid,
                                                const DecoderOptions& decoder,
                                                const ClassicalOptions& options = {});

}  // namespace cotans
