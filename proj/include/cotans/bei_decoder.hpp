#pragma once

#include <span>
#include <vector>

#include "cotans/cotans_image.hpp"
#include "cotans/geometry.hpp"

namespace cotans {

struct BoundaryDetection {
  Boundary boundary;
  double score{0.0};  // peak value
};

struct DecoderOptions {
  int n_max{2};
  double threshold{0.5};
  int window{11};  // odd; used for the centroid patch and for suppression
};

void validate(const DecoderOptions& options);

/// Peak search with separate centroid and suppression extents (half-widths
/// in cells). decode_bei uses the same square window for both.
struct PeakSearch {
  int n_max{2};
  double threshold{0.5};
  int centroid_rho{5};
  int centroid_theta{5};
  int suppress_rho{5};
  int suppress_theta{5};
};

std::vector<BoundaryDetection> find_peaks(const RhoThetaImage& image, const PeakSearch& search);

/// Iterative peak picking: take the global maximum, stop if it is below the
/// threshold, refine by the intensity-weighted centroid of the surrounding
/// window (theta wraps, rho clips), then zero that window. A peak whose
/// centroid lands within one cell of an earlier detection is dropped.
/// Detections are returned in discovery order.
std::vector<BoundaryDetection> decode_bei(const RhoThetaImage& image, const DecoderOptions& options);

inline int estimate_count(std::span<const BoundaryDetection> detections) {
  return static_cast<int>(detections.size());
}

}  // namespace cotans
