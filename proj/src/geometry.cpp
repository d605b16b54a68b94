#include "cotans/geometry.hpp"

#include <stdexcept>
#include <string>

namespace cotans {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap_angle(double radians) {
  double w = std::fmod(radians + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  // fmod can land exactly on 2*pi after the shift for tiny negative inputs.
  if (w >= 2.0 * kPi) w -= 2.0 * kPi;
  return w - kPi;
}

Boundary canonical_boundary(double rho, double theta) {
  if (rho < 0.0) {
    rho = -rho;
    theta += kPi;
  }
  return {rho, wrap_angle(theta)};
}

bool is_valid(const Boundary& b) {
  return std::isfinite(b.rho) && std::isfinite(b.theta) && b.rho >= 0.0 && b.theta >= -kPi &&
         b.theta < kPi;
}

double signed_distance(const Point2& p, const Boundary& b) {
  return p.dot(unit_normal(b.theta)) - b.rho;
}

bool is_valid(const Ellipse& e) {
  return std::isfinite(e.path_distance) && e.path_distance > distance(e.focus1, e.focus2);
}

void validate(const Scenario& s) {
  if (s.receivers.size() < 3) throw std::invalid_argument("scenario needs at least 3 receivers");
  if (!(s.sound_speed > 0.0)) throw std::invalid_argument("sound speed must be positive");
  for (std::size_t i = 0; i < s.receivers.size(); ++i) {
    for (std::size_t k = i + 1; k < s.receivers.size(); ++k) {
      if (s.receivers[i] == s.receivers[k]) {
        throw std::invalid_argument("receivers " + std::to_string(i) + " and " +
                                    std::to_string(k) + " coincide");
      }
    }
  }
  for (const auto& b : s.boundaries) {
    if (!is_valid(b)) throw std::invalid_argument("boundary outside canonical chart");
    const double se = signed_distance(s.emitter, b);
    for (const auto& r : s.receivers) {
      if (se * signed_distance(r, b) <= 0.0) {
        throw std::invalid_argument("boundary separates emitter from a receiver");
      }
    }
  }
}

Point2 mirror_point(const Point2& p, const Boundary& b) {
  const Point2 n = unit_normal(b.theta);
  return p + 2.0 * (b.rho - p.dot(n)) * n;
}

double nlos_distance(const Point2& emitter, const Point2& receiver, const Boundary& b) {
  return distance(mirror_point(emitter, b), receiver);
}

double support_rho(const Ellipse& e, double theta) {
  if (!is_valid(e)) throw std::invalid_argument("degenerate ellipse: path distance <= focal distance");
  const Point2 axis = e.focus2 - e.focus1;
  const double focal = axis.norm();
  const Point2 u = focal > 0.0 ? axis * (1.0 / focal) : Point2{1.0, 0.0};
  const Point2 v{-u.y, u.x};
  const Point2 centre = 0.5 * (e.focus1 + e.focus2);
  const double a = 0.5 * e.path_distance;
  const double c = 0.5 * focal;
  const double b2 = a * a - c * c;
  const Point2 n = unit_normal(theta);
  const double un = u.dot(n);
  const double vn = v.dot(n);
  return centre.dot(n) + std::sqrt(a * a * un * un + b2 * vn * vn);
}

Boundary boundary_from_virtual(const Point2& emitter, const Point2& virtual_emitter) {
  const Point2 d = virtual_emitter - emitter;
  const double len = d.norm();
  if (len == 0.0) throw std::invalid_argument("virtual emitter coincides with emitter");
  const Point2 n = d * (1.0 / len);
  const Point2 mid = 0.5 * (emitter + virtual_emitter);
  return canonical_boundary(mid.dot(n), std::atan2(n.y, n.x));
}

}  // namespace cotans
