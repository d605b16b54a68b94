#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they check.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "cotans/geometry.hpp"

namespace oracle {

/// Golden-section minimization of a unimodal f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return f(0.5 * (a + b));
}

/// Shortest emitter -> line -> receiver path, by direct search over the
/// touching point on the boundary line.
inline double reflected_path(const cotans::Point2& e, const cotans::Point2& r, const cotans::Boundary& b) {
  const double nx = std::cos(b.theta), ny = std::sin(b.theta);
  const double tx = -ny, ty = nx;
  auto length = [&](double s) {
    const double qx = b.rho * nx + s * tx, qy = b.rho * ny + s * ty;
    return std::hypot(e.x - qx, e.y - qy) + std::hypot(r.x - qx, r.y - qy);
  };
  return golden_min(length, -200.0, 200.0, 1e-11);
}

/// Points on an ellipse given by foci and summed focal distance.
inline std::vector<cotans::Point2> sample_ellipse(const cotans::Point2& f1, const cotans::Point2& f2,
                                                  double d, int n) {
  const double cx = 0.5 * (f1.x + f2.x), cy = 0.5 * (f1.y + f2.y);
  const double dx = f2.x - f1.x, dy = f2.y - f1.y;
  const double focal = std::hypot(dx, dy);
  const double ux = focal > 0 ? dx / focal : 1.0, uy = focal > 0 ? dy / focal : 0.0;
  const double a = d / 2, c = focal / 2, bb = std::sqrt(a * a - c * c);
  std::vector<cotans::Point2> pts;
  for (int k = 0; k < n; ++k) {
    const double phi = 2 * std::numbers::pi * k / n;
    const double p = a * std::cos(phi), q = bb * std::sin(phi);
    pts.push_back({cx + p * ux - q * uy, cy + p * uy + q * ux});
  }
  return pts;
}

/// max over the ellipse of x . n(theta): dense sampling of the parametric
/// angle, then golden-section refinement around the best sample.
inline double ellipse_max_projection(const cotans::Point2& f1, const cotans::Point2& f2, double d,
                                     double theta, int samples = 10000) {
  const double cx = 0.5 * (f1.x + f2.x), cy = 0.5 * (f1.y + f2.y);
  const double dx = f2.x - f1.x, dy = f2.y - f1.y;
  const double focal = std::hypot(dx, dy);
  const double ux = focal > 0 ? dx / focal : 1.0, uy = focal > 0 ? dy / focal : 0.0;
  const double a = d / 2, c = focal / 2, bb = std::sqrt(a * a - c * c);
  const double nx = std::cos(theta), ny = std::sin(theta);
  auto proj = [&](double phi) {
    const double p = a * std::cos(phi), q = bb * std::sin(phi);
    return (cx + p * ux - q * uy) * nx + (cy + p * uy + q * ux) * ny;
  };
  const double step = 2 * std::numbers::pi / samples;
  double best_phi = 0, best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double v = proj(k * step);
    if (v > best) {
      best = v;
      best_phi = k * step;
    }
  }
  return -golden_min([&](double phi) { return -proj(phi); }, best_phi - step, best_phi + step, 1e-14);
}

/// Brute-force range-LS minimizer on a square grid of given step.
inline cotans::Point2 grid_search_ls(const std::vector<cotans::Point2>& receivers,
                                     const std::vector<double>& distances, cotans::Point2 centre,
                                     double half_width, double step) {
  cotans::Point2 best = centre;
  double best_cost = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::round(half_width / step));
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const double x = centre.x + i * step, y = centre.y + j * step;
      double cost = 0;
      for (std::size_t k = 0; k < receivers.size(); ++k) {
        const double r = std::hypot(x - receivers[k].x, y - receivers[k].y) - distances[k];
        cost += r * r;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = {x, y};
      }
    }
  }
  return best;
}

// Coarse grid followed by successively finer grids around the best cell.
inline cotans::Point2 grid_search_ls_refined(const std::vector<cotans::Point2>& receivers,
                                             const std::vector<double>& distances,
                                             cotans::Point2 centre, double half_width, double step,
                                             int levels = 4) {
  cotans::Point2 best = grid_search_ls(receivers, distances, centre, half_width, step);
  for (int l = 0; l < levels; ++l) {
    best = grid_search_ls(receivers, distances, best, 2 * step, step / 20);
    step /= 20;
  }
  return best;
}

inline double rmse(const std::vector<double>& errors) {
  double s = 0;
  for (double e : errors) s += e * e;
  return std::sqrt(s / errors.size());
}

}  // namespace oracle
