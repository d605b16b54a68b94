#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "cotans/geometry.hpp"

using namespace cotans;
using std::numbers::pi;

namespace {

Boundary random_boundary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rho(0.5, 9.0), theta(-pi, pi);
  return {rho(rng), wrap_angle(theta(rng))};
}

Point2 random_point(std::mt19937_64& rng, double half = 5.0) {
  std::uniform_real_distribution<double> u(-half, half);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("wrap_angle maps into [-pi, pi)") {
  CHECK(wrap_angle(pi) == doctest::Approx(-pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(-pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(-1e-18) <= 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_angle(u(rng));
    CHECK(w >= -pi);
    CHECK(w < pi);
  }
}

TEST_CASE("mirror_point reflects across the boundary line") {
  const Point2 a = mirror_point({1, 0}, {5, 0});
  CHECK(a.x == doctest::Approx(9));
  CHECK(a.y == doctest::Approx(0).epsilon(1e-15));
  const Point2 b = mirror_point({0, 0}, {2, pi / 2});
  CHECK(b.x == doctest::Approx(0).epsilon(1e-12));
  CHECK(b.y == doctest::Approx(4));

  const Point2 p{1.3, -0.7};
  const Boundary bd{4.2, 0.9};
  const Point2 m = mirror_point(p, bd);
  const Point2 back = mirror_point(m, bd);
  CHECK(distance(back, p) < 1e-12);
  const Point2 mid = 0.5 * (p + m);
  CHECK(std::abs(signed_distance(mid, bd)) < 1e-12);
}

TEST_CASE("mirror involution over random inputs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p = random_point(rng);
    const Boundary b = random_boundary(rng);
    CHECK(distance(mirror_point(mirror_point(p, b), b), p) < 1e-12);
  }
}

TEST_CASE("nlos_distance trivial cases") {
  CHECK(nlos_distance({0, 0}, {2, 0}, {1, pi / 2}) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(nlos_distance({0, 0}, {0, 0}, {3, 0}) == doctest::Approx(6));
}

TEST_CASE("nlos_distance equals the shortest touching path") {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 200) {
    const Boundary b = random_boundary(rng);
    const Point2 e = random_point(rng), r = random_point(rng);
    // Both on the origin side so the specular path exists.
    if (signed_distance(e, b) >= 0 || signed_distance(r, b) >= 0) continue;
    CHECK(std::abs(nlos_distance(e, r, b) - oracle::reflected_path(e, r, b)) < 1e-7);
    ++checked;
  }
}

TEST_CASE("support_rho trivial ellipses") {
  const Ellipse circle{{0, 0}, {0, 0}, 4};
  for (double t : {-pi, -1.0, 0.0, 0.3, 2.9}) CHECK(support_rho(circle, t) == doctest::Approx(2));
  const Ellipse e{{-1, 0}, {1, 0}, 4};
  CHECK(support_rho(e, 0) == doctest::Approx(2));
  CHECK(support_rho(e, pi / 2) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("support_rho rejects degenerate ellipses") {
  CHECK_THROWS_AS(support_rho(Ellipse{{0, 0}, {2, 0}, 2}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(support_rho(Ellipse{{0, 0}, {2, 0}, 1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(support_rho(Ellipse{{0, 0}, {0, 0}, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("support line is tangent: touches and never crosses") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> extra(0.01, 10.0), theta(-pi, pi);
  for (int i = 0; i < 100; ++i) {
    const Point2 f1 = random_point(rng), f2 = random_point(rng);
    const Ellipse e{f1, f2, distance(f1, f2) + extra(rng)};
    const double t = theta(rng);
    const double rho = support_rho(e, t);
    const Point2 n = unit_normal(t);
    double max_proj = -1e300;
    for (const auto& q : oracle::sample_ellipse(f1, f2, e.path_distance, 10000)) {
      max_proj = std::max(max_proj, q.dot(n));
    }
    const double scale = std::max(1.0, std::abs(rho));
    CHECK(max_proj <= rho + 1e-9 * scale);
    const double touch = oracle::ellipse_max_projection(f1, f2, e.path_distance, t);
    CHECK(std::abs(touch - rho) <= 1e-9 * scale);
  }
}

TEST_CASE("support of the echo ellipse at the true azimuth is the true range") {
  std::mt19937_64 rng(9);
  int checked = 0;
  while (checked < 300) {
    const Boundary b = random_boundary(rng);
    const Point2 e = random_point(rng), r = random_point(rng);
    if (signed_distance(e, b) >= 0 || signed_distance(r, b) >= 0) continue;
    const Ellipse ell{e, r, nlos_distance(e, r, b)};
    CHECK(support_rho(ell, b.theta) == doctest::Approx(b.rho).epsilon(1e-10));
    ++checked;
  }
}

TEST_CASE("boundary_from_virtual inverts mirror_point") {
  const Boundary a = boundary_from_virtual({1, 0}, {9, 0});
  CHECK(a.rho == doctest::Approx(5));
  CHECK(a.theta == doctest::Approx(0).epsilon(1e-15));
  const Boundary b = boundary_from_virtual({0, 0}, {0, 4});
  CHECK(b.rho == doctest::Approx(2));
  CHECK(b.theta == doctest::Approx(pi / 2));
  CHECK_THROWS_AS(boundary_from_virtual({1, 1}, {1, 1}), std::invalid_argument);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const Point2 e = random_point(rng), v = random_point(rng);
    const Boundary bd = boundary_from_virtual(e, v);
    CHECK(is_valid(bd));
    CHECK(distance(mirror_point(e, bd), v) < 1e-12 * std::max(1.0, distance(e, v)) + 1e-12);
  }
  for (int i = 0; i < 500; ++i) {
    const Boundary truth = random_boundary(rng);
    const Point2 e = random_point(rng, 3.0);
    if (std::abs(signed_distance(e, truth)) < 1e-3) continue;
    const Boundary back = boundary_from_virtual(e, mirror_point(e, truth));
    CHECK(back.rho == doctest::Approx(truth.rho).epsilon(1e-10));
    CHECK(std::abs(wrap_angle(back.theta - truth.theta)) < 1e-10);
  }
}

TEST_CASE("negative range is canonicalized") {
  const Boundary b = canonical_boundary(-2.0, 0.5);
  CHECK(b.rho == doctest::Approx(2.0));
  CHECK(b.theta == doctest::Approx(0.5 - pi));
}

TEST_CASE("scenario validation") {
  Scenario s;
  s.emitter = {3.5, 0.5};
  s.receivers = {{-2.5, 3.5}, {-2, 3}, {-3, 4}};
  s.boundaries = {{6, 0.2}};
  CHECK_NOTHROW(validate(s));
  s.boundaries.push_back({1.0, pi / 2});  // y = 1 separates emitter from receivers
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.boundaries.pop_back();
  s.receivers.push_back({-2, 3});
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.receivers = {{-2.5, 3.5}, {-2, 3}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
}
