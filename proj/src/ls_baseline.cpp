#include "cotans/ls_baseline.hpp"

#include <cmath>
#include <random>

#include "cotans/assignment.hpp"
#include "cotans/seeding.hpp"

namespace cotans {

namespace {

double range_cost(std::span<const Point2> receivers, const LabeledEchoSet& echoes, const Point2& v) {
  double cost = 0.0;
  for (const auto& [idx, d] : echoes.distances) {
    const double r = distance(v, receivers[idx]) - d;
    cost += r * r;
  }
  return cost;
}

}  // namespace

LsSolution ls_virtual_emitter(std::span<const Point2> receivers, const LabeledEchoSet& echoes,
                              const Point2& init, const LsOptions& options) {
  if (echoes.distances.size() < 3) throw std::invalid_argument("LS needs at least 3 distances");
  if (!std::isfinite(init.x) || !std::isfinite(init.y)) {
    throw std::invalid_argument("LS initial point must be finite");
  }
  for (const auto& [idx, d] : echoes.distances) {
    if (idx >= receivers.size()) throw std::out_of_range("receiver index in echo set");
  }

  LsSolution sol{init, range_cost(receivers, echoes, init), 0};
  double lambda = 0.0;
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    sol.iterations = iter;
    // Normal equations of the linearized range residuals.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (const auto& [idx, d] : echoes.distances) {
      const Point2 diff = sol.position - receivers[idx];
      const double range = diff.norm();
      if (range == 0.0) continue;
      const double jx = diff.x / range;
      const double jy = diff.y / range;
      const double r = range - d;
      a11 += jx * jx;
      a12 += jx * jy;
      a22 += jy * jy;
      g1 += jx * r;
      g2 += jy * r;
    }
    const double trace = a11 + a22;
    if (!(trace > 0.0) || a11 * a22 - a12 * a12 <= 1e-12 * trace * trace) {
      throw LsFailure("singular normal equations");
    }

    bool improved = false;
    Point2 step{};
    for (int attempt = 0; attempt < 30; ++attempt) {
      const double d11 = a11 + lambda * a11;
      const double d22 = a22 + lambda * a22;
      const double det = d11 * d22 - a12 * a12;
      step = {-(d22 * g1 - a12 * g2) / det, -(d11 * g2 - a12 * g1) / det};
      const Point2 candidate = sol.position + step;
      const double cost = range_cost(receivers, echoes, candidate);
      if (cost <= sol.cost) {
        sol.position = candidate;
        sol.cost = cost;
        lambda *= 0.5;
        improved = true;
        break;
      }
      lambda = lambda == 0.0 ? 1e-3 : lambda * 10.0;
    }
    if (!improved || step.norm() < options.step_tol) break;
  }
  return sol;
}

std::vector<LabeledEchoSet> gaussian_echoes(const Scenario& scenario, double sigma,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<LabeledEchoSet> sets;
  for (std::size_t j = 0; j < scenario.boundaries.size(); ++j) {
    LabeledEchoSet set{j, {}};
    for (std::size_t i = 0; i < scenario.receivers.size(); ++i) {
      const double d = nlos_distance(scenario.emitter, scenario.receivers[i], scenario.boundaries[j]);
      set.distances.emplace_back(i, d + sigma * gauss(rng));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<LabeledEchoSet> label_echoes(const Scenario& scenario,
                                         std::span<const DelayEstimates> nlos) {
  const std::size_t n_b = scenario.boundaries.size();
  std::vector<LabeledEchoSet> sets(n_b);
  for (std::size_t j = 0; j < n_b; ++j) sets[j].boundary_index = j;
  for (const auto& est : nlos) {
    const Point2& r = scenario.receivers.at(est.receiver_index);
    const std::size_t n_e = est.taus.size();
    if (n_e == 0 || n_b == 0) continue;
    std::vector<double> cost(n_b * n_e);
    for (std::size_t j = 0; j < n_b; ++j) {
      const double truth = nlos_distance(scenario.emitter, r, scenario.boundaries[j]);
      for (std::size_t k = 0; k < n_e; ++k) {
        cost[j * n_e + k] = std::abs(scenario.sound_speed * est.taus[k] - truth);
      }
    }
    for (const auto& [j, k] : min_cost_assignment(cost, n_b, n_e)) {
      sets[j].distances.emplace_back(est.receiver_index, scenario.sound_speed * est.taus[k]);
    }
  }
  return sets;
}

std::vector<std::optional<Boundary>> ls_boundaries(const Scenario& scenario,
                                                   std::span<const LabeledEchoSet> echoes,
                                                   const LsOptions& options) {
  std::vector<std::optional<Boundary>> out(scenario.boundaries.size());
  for (const auto& set : echoes) {
    if (set.boundary_index >= out.size()) throw std::out_of_range("boundary index in echo set");
    if (set.distances.size() < 3) continue;
    const Point2 init = mirror_point(scenario.emitter, scenario.boundaries[set.boundary_index]);
    try {
      const auto sol = ls_virtual_emitter(scenario.receivers, set, init, options);
      out[set.boundary_index] = boundary_from_virtual(scenario.emitter, sol.position);
    } catch (const LsFailure&) {
      // left empty; the caller counts it
    } catch (const std::invalid_argument&) {
      // solution collapsed onto the emitter
    }
  }
  return out;
}

}  // namespace cotans
