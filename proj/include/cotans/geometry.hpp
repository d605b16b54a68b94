#pragma once

// Planar geometry for first-order reflections: mirror images across
// boundary lines, reflected path lengths, and the ellipse support function
// that maps one echo delay onto a curve in (rho, theta) space.

#include <cmath>
#include <numbers>
#include <vector>

namespace cotans {

struct Point2 {
  double x{0.0};
  double y{0.0};

  constexpr Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Point2 operator*(double s, const Point2& p) { return {p.x * s, p.y * s}; }
  constexpr double dot(const Point2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  constexpr bool operator==(const Point2&) const = default;
};

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

/// Wraps an angle into [-pi, pi).
double wrap_angle(double radians);

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline Point2 unit_normal(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// A planar reflector: the line {x : x . n(theta) = rho} with rho >= 0 and
/// theta in [-pi, pi).
struct Boundary {
  double rho{0.0};
  double theta{0.0};

  constexpr bool operator==(const Boundary&) const = default;
};

/// Canonical chart: negative ranges flip the normal, theta is wrapped.
Boundary canonical_boundary(double rho, double theta);

bool is_valid(const Boundary& b);

/// x . n - rho; negative on the origin side of the line.
double signed_distance(const Point2& p, const Boundary& b);

/// Locus of points whose summed distance to the two foci equals path_distance.
struct Ellipse {
  Point2 focus1;
  Point2 focus2;
  double path_distance{0.0};
};

/// True when path_distance strictly exceeds the focal separation.
bool is_valid(const Ellipse& e);

struct Scenario {
  Point2 emitter;
  std::vector<Point2> receivers;
  std::vector<Boundary> boundaries;
  double sound_speed{1500.0};
};

/// Throws std::invalid_argument when a scenario invariant is broken: fewer
/// than three receivers, coincident receivers, an invalid boundary, or a
/// boundary separating the emitter from a receiver.
void validate(const Scenario& s);

/// Reflection of p across the boundary line.
Point2 mirror_point(const Point2& p, const Boundary& b);

/// Length of the specular path emitter -> boundary -> receiver.
double nlos_distance(const Point2& emitter, const Point2& receiver, const Boundary& b);

/// Support function of the ellipse: the signed offset rho such that the line
/// x . n(theta) = rho touches the ellipse with outward normal n(theta).
/// Throws std::invalid_argument for a degenerate ellipse.
double support_rho(const Ellipse& e, double theta);

/// Perpendicular bisector of emitter and its virtual image, in canonical
/// (rho >= 0) form. Throws std::invalid_argument if the points coincide.
Boundary boundary_from_virtual(const Point2& emitter, const Point2& virtual_emitter);

}  // namespace cotans
