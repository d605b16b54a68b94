#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "cotans/bei_decoder.hpp"

using namespace cotans;

namespace {

double cell_rho_error(const GridSpec& g, double a, double b) { return std::abs(a - b) / g.delta_rho(); }

double cell_theta_error(const GridSpec& g, double a, double b) {
  return std::abs(wrap_angle(a - b)) / g.delta_theta();
}

RhoThetaImage rotate_columns(const RhoThetaImage& img, int k) {
  RhoThetaImage out(img.grid);
  const int n = img.grid.n_theta;
  for (int r = 0; r < img.grid.n_rho; ++r) {
    for (int c = 0; c < n; ++c) out.at(r, ((c + k) % n + n) % n) = img.at(r, c);
  }
  return out;
}

}  // namespace

TEST_CASE("decoder options are validated") {
  const RhoThetaImage img{GridSpec{}};
  CHECK_THROWS_AS(decode_bei(img, {0, 0.5, 11}), std::invalid_argument);
  CHECK_THROWS_AS(decode_bei(img, {2, 0.0, 11}), std::invalid_argument);
  CHECK_THROWS_AS(decode_bei(img, {2, 1.0, 11}), std::invalid_argument);
  CHECK_THROWS_AS(decode_bei(img, {2, 0.5, 10}), std::invalid_argument);
}

TEST_CASE("two rendered pulses decode exactly") {
  const GridSpec g;
  // Both sit on bin centres, so the centroid is exact.
  const std::vector<Boundary> truth{{g.rho_at(30), g.theta_at(100)}, {g.rho_at(70), g.theta_at(250)}};
  const auto det = decode_bei(render_bei(truth, g).image, {});
  REQUIRE(det.size() == 2);
  CHECK(estimate_count(det) == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    bool matched = false;
    for (const auto& d : det) {
      if (std::abs(d.boundary.rho - truth[k].rho) < 1e-9 &&
          std::abs(wrap_angle(d.boundary.theta - truth[k].theta)) < 1e-9) {
        matched = true;
        CHECK(d.score == 1.0);
      }
    }
    CHECK(matched);
  }
}

TEST_CASE("an all-zero image decodes to nothing") {
  const RhoThetaImage img{GridSpec{}};
  CHECK(decode_bei(img, {}).empty());
}

TEST_CASE("uniform clutter below threshold does not add detections") {
  const GridSpec g;
  const std::vector<Boundary> one{{4.2, 0.9}};
  auto img = render_bei(one, g).image;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  for (auto& v : img.values) v = std::min(1.0, v + u(rng));
  const auto det = decode_bei(img, {});
  REQUIRE(det.size() == 1);
  CHECK(cell_rho_error(g, det[0].boundary.rho, 4.2) <= 1.0);
  CHECK(cell_theta_error(g, det[0].boundary.theta, 0.9) <= 1.0);
}

TEST_CASE("decoding is scale invariant with a matching threshold") {
  const GridSpec g;
  const std::vector<Boundary> truth{{2.5, -1.2}, {6.1, 2.0}};
  const auto img = render_bei(truth, g).image;
  auto scaled = img;
  for (auto& v : scaled.values) v *= 0.6;
  const auto a = decode_bei(img, {2, 0.5, 11});
  const auto b = decode_bei(scaled, {2, 0.3, 11});
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].boundary.rho == doctest::Approx(b[k].boundary.rho).epsilon(1e-12));
    CHECK(a[k].boundary.theta == doctest::Approx(b[k].boundary.theta).epsilon(1e-12));
    CHECK(b[k].score == doctest::Approx(0.6 * a[k].score));
  }
}

TEST_CASE("rotating columns rotates theta by the same number of cells") {
  const GridSpec g;
  const std::vector<Boundary> truth{{3.0, 3.0}, {7.0, -0.5}};
  const auto img = render_bei(truth, g).image;
  const auto base = decode_bei(img, {});
  REQUIRE(base.size() == 2);
  for (int k : {1, 17, 180, 359}) {
    const auto rot = decode_bei(rotate_columns(img, k), {});
    REQUIRE(rot.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(rot[i].boundary.rho == doctest::Approx(base[i].boundary.rho));
      CHECK(std::abs(wrap_angle(rot[i].boundary.theta - base[i].boundary.theta - k * g.delta_theta())) <
            1e-9);
    }
  }
}

TEST_CASE("decoder stops after n_max detections") {
  const GridSpec g;
  const std::vector<Boundary> three{{2.0, -2.0}, {5.0, 0.0}, {8.0, 2.0}};
  const auto img = render_bei(three, g).image;
  CHECK(decode_bei(img, {2, 0.5, 11}).size() == 2);
  CHECK(decode_bei(img, {3, 0.5, 11}).size() == 3);
  CHECK(decode_bei(img, {10, 0.5, 11}).size() == 3);
}

TEST_CASE("a pulse that survives suppression is not reported twice") {
  const GridSpec g;
  RhoThetaImage img(g);
  // A ridge wider than the window leaves a second maximum just beside the first.
  for (int c = 150; c <= 170; ++c) img.at(40, c) = 1.0;
  const auto det = decode_bei(img, {4, 0.5, 11});
  CHECK(det.size() >= 2);
  for (std::size_t i = 0; i < det.size(); ++i) {
    for (std::size_t j = i + 1; j < det.size(); ++j) {
      CHECK(cell_theta_error(g, det[i].boundary.theta, det[j].boundary.theta) > 1.0);
    }
  }
}
