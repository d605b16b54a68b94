#include "cotans/cotans_image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cotans/raw_io.hpp"

namespace cotans {

namespace {
constexpr double kPi = std::numbers::pi;

int wrap_column(long long column, int n_theta) {
  long long w = column % n_theta;
  if (w < 0) w += n_theta;
  return static_cast<int>(w);
}
}  // namespace

double GridSpec::delta_theta() const { return 2.0 * kPi / n_theta; }

double GridSpec::theta_at(double column) const { return -kPi + column * 2.0 * kPi / n_theta; }

void validate(const GridSpec& grid) {
  if (!(grid.rho_max > 0.0) || grid.n_rho < 2 || grid.n_theta < 4) {
    throw std::invalid_argument("grid needs rho_max > 0, n_rho >= 2, n_theta >= 4");
  }
}

double RhoThetaImage::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

BinIndex bin_of(const GridSpec& grid, const Boundary& b) {
  if (!(b.rho >= 0.0 && b.rho <= grid.rho_max)) {
    throw std::out_of_range("rho " + std::to_string(b.rho) + " outside grid");
  }
  // Multiply before dividing so decimal half-cells (e.g. 5.05 m on a 0.1 m
  // grid) land exactly on .5.
  const double row = b.rho * (grid.n_rho - 1) / grid.rho_max;
  const double column = (b.theta + kPi) * grid.n_theta / (2.0 * kPi);
  return {static_cast<int>(std::floor(row + 0.5)),
          wrap_column(static_cast<long long>(std::floor(column + 0.5)), grid.n_theta)};
}

int rasterize_curve(RhoThetaImage& image, const Ellipse& e) {
  const GridSpec& g = image.grid;
  int votes = 0;
  for (int j = 0; j < g.n_theta; ++j) {
    const double rho = support_rho(e, g.theta_at(j));
    if (!(rho >= 0.0 && rho <= g.rho_max)) continue;
    const int row = static_cast<int>(std::floor(rho * (g.n_rho - 1) / g.rho_max + 0.5));
    image.at(row, j) += 1.0;
    ++votes;
  }
  return votes;
}

CotansImage accumulate_cotans(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                              const GridSpec& grid) {
  validate(grid);
  CotansImage out{RhoThetaImage(grid)};
  for (const auto& est : nlos) {
    if (est.receiver_index >= array.receivers.size()) throw std::out_of_range("receiver index");
    const Point2& r = array.receivers[est.receiver_index];
    for (double tau : est.taus) {
      const Ellipse e{array.emitter, r, array.sound_speed * tau};
      if (!(tau > 0.0) || !is_valid(e)) {
        ++out.curves_skipped;
        continue;
      }
      rasterize_curve(out.image, e);
      ++out.curves_drawn;
    }
  }
  return out;
}

void normalize_max(RhoThetaImage& image) {
  const double peak = image.max();
  if (!(peak > 0.0)) return;
  for (auto& v : image.values) v /= peak;
}

CotansImage build_cotans(const ArrayGeometry& array, std::span<const DelayEstimates> nlos,
                         const GridSpec& grid) {
  auto out = accumulate_cotans(array, nlos, grid);
  normalize_max(out.image);
  return out;
}

BoundaryEstimateImage render_bei(std::span<const Boundary> boundaries, const GridSpec& grid,
                                 const PulseShape& shape) {
  validate(grid);
  BoundaryEstimateImage bei{RhoThetaImage(grid)};
  const double inv = 1.0 / (2.0 * shape.sigma * shape.sigma);
  for (const auto& b : boundaries) {
    const BinIndex centre = bin_of(grid, b);
    for (int dr = -shape.half_width; dr <= shape.half_width; ++dr) {
      const int row = centre.rho_index + dr;
      if (row < 0 || row >= grid.n_rho) continue;
      for (int dt = -shape.half_width; dt <= shape.half_width; ++dt) {
        const int col = wrap_column(centre.theta_index + dt, grid.n_theta);
        bei.image.at(row, col) += std::exp(-(dr * dr + dt * dt) * inv);
      }
    }
  }
  for (auto& v : bei.image.values) v = std::min(v, 1.0);
  return bei;
}

void write_image(const std::filesystem::path& path, const RhoThetaImage& image) {
  write_f32(path, image.values);
}

RhoThetaImage read_image(const std::filesystem::path& path, const GridSpec& grid) {
  validate(grid);
  auto values = read_f32(path);
  if (values.size() != grid.size()) {
    throw std::runtime_error(path.string() + ": expected " + std::to_string(grid.size()) +
                             " float32 values, found " + std::to_string(values.size()));
  }
  RhoThetaImage image(grid);
  image.values = std::move(values);
  return image;
}

}  // namespace cotans
