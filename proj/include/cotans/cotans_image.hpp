#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "cotans/delay_estimation.hpp"
#include "cotans/geometry.hpp"

namespace cotans {

/// Discretization of (rho, theta) space. Rows are rho cells at
/// i * rho_max / (n_rho - 1); columns are theta cells centred at
/// -pi + j * 2 pi / n_theta.
struct GridSpec {
  double rho_max{10.0};
  int n_rho{101};
  int n_theta{360};

  double delta_rho() const { return rho_max / (n_rho - 1); }
  double delta_theta() const;
  double rho_at(double row) const { return row * rho_max / (n_rho - 1); }
  double theta_at(double column) const;
  std::size_t size() const { return static_cast<std::size_t>(n_rho) * n_theta; }

  bool operator==(const GridSpec&) const = default;
};

void validate(const GridSpec& grid);

/// Row-major n_rho x n_theta image.
struct RhoThetaImage {
  GridSpec grid;
  std::vector<double> values;

  RhoThetaImage() = default;
  explicit RhoThetaImage(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}

  double& at(int row, int column) { return values[index(row, column)]; }
  double at(int row, int column) const { return values[index(row, column)]; }
  double max() const;

 private:
  std::size_t index(int row, int column) const {
    return static_cast<std::size_t>(row) * grid.n_theta + column;
  }
};

/// Accumulated curve votes. After build_cotans the values are scaled so the
/// maximum is 1 (or all zero when nothing was drawn).
struct CotansImage {
  RhoThetaImage image;
  int curves_drawn{0};
  int curves_skipped{0};  // infeasible ellipses (c * tau <= focal distance)
  bool empty() const { return curves_drawn == 0 || image.max() == 0.0; }
};

/// Gaussian-pulse heatmap of boundary locations, values in [0, 1].
struct BoundaryEstimateImage {
  RhoThetaImage image;
};

struct BinIndex {
  int rho_index{0};
  int theta_index{0};
  bool operator==(const BinIndex&) const = default;
};

/// Nearest cell, half-way cases rounded up. Throws std::out_of_range if rho
/// lies outside [0, rho_max].
BinIndex bin_of(const GridSpec& grid, const Boundary& b);

/// One vote per theta column where the support function lands inside
/// [0, rho_max]. Returns the number of votes cast.
int rasterize_curve(RhoThetaImage& image, const Ellipse& e);

struct ArrayGeometry {
  Point2 emitter;
  std::vector<Point2> receivers;
  double sound_speed{1500.0};
};

/// Unnormalized accumulation of one curve per (receiver, NLOS delay).
CotansImage accumulate_cotans(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                              const GridSpec& grid);

/// accumulate_cotans followed by normalization to a unit maximum.
CotansImage build_cotans(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                         const GridSpec& grid);

void normalize_max(RhoThetaImage& image);

struct PulseShape {
  double sigma{2.0};   // pixels
  int half_width{5};   // window is (2 * half_width + 1) square
};

/// Truncated 2D Gaussian at each boundary's cell; theta wraps, rho clips,
/// overlapping pulses add and the result is clamped to [0, 1].
/// Throws std::out_of_range for a boundary beyond rho_max.
BoundaryEstimateImage render_bei(std::span<const Boundary> boundaries, const GridSpec& grid,
                                 const PulseShape& shape = {});

/// Shared interchange format: raw little-endian float32, row-major
/// (rho rows x theta columns), no header.
void write_image(const std::filesystem::path& path, const RhoThetaImage& image);

/// Throws std::runtime_error when the file does not hold exactly grid.size() values.
RhoThetaImage read_image(const std::filesystem::path& path, const GridSpec& grid);

}  // namespace cotans
