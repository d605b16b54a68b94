#include "cotans/delay_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cotans {

namespace {

struct Peak {
  double lag{0.0};  // fractional samples
  double value{0.0};
};

// Largest |c[k]| with k outside every [centre - sep, centre + sep].
std::ptrdiff_t pick_peak(std::span<const double> c, std::span<const double> excluded, double sep) {
  std::ptrdiff_t best = -1;
  double best_mag = -1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double mag = std::abs(c[k]);
    if (mag <= best_mag) continue;
    bool blocked = false;
    for (double centre : excluded) {
      if (std::abs(static_cast<double>(k) - centre) <= sep) {
        blocked = true;
        break;
      }
    }
    if (!blocked) {
      best = static_cast<std::ptrdiff_t>(k);
      best_mag = mag;
    }
  }
  return best;
}

Peak refine_parabolic(std::span<const double> c, std::size_t k) {
  const double sign = c[k] < 0.0 ? -1.0 : 1.0;
  const double y1 = sign * c[k];
  if (k == 0 || k + 1 >= c.size()) return {static_cast<double>(k), c[k]};
  const double y0 = sign * c[k - 1];
  const double y2 = sign * c[k + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (!(denom < 0.0)) return {static_cast<double>(k), c[k]};
  const double delta = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
  return {static_cast<double>(k) + delta, sign * (y1 - 0.25 * (y0 - y2) * delta)};
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void sort_estimates(DelayEstimates& est) {
  std::vector<std::size_t> order(est.taus.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return est.taus[a] < est.taus[b]; });
  DelayEstimates sorted = est;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.taus[i] = est.taus[order[i]];
    sorted.amplitudes[i] = est.amplitudes[order[i]];
  }
  est = std::move(sorted);
}

}  // namespace

std::vector<double> cross_correlate(std::span<const double> x, std::span<const double> pulse) {
  if (pulse.empty() || x.size() < pulse.size()) {
    throw std::invalid_argument("signal shorter than pulse");
  }
  std::vector<double> c(x.size() - pulse.size() + 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = dot(x.subspan(k, pulse.size()), pulse);
  }
  return c;
}

double mainlobe_width(std::span<const double> pulse) {
  const std::size_t n = pulse.size();
  if (n == 0) throw std::invalid_argument("empty pulse");
  // Autocorrelation at lags -(n-1)..(n-1); envelope via the analytic signal.
  const std::size_t len = 2 * n - 1;
  std::vector<double> r(len, 0.0);
  for (std::size_t lag = 0; lag < n; ++lag) {
    const double v = dot(pulse.subspan(lag), pulse.first(n - lag));
    r[n - 1 + lag] = v;
    r[n - 1 - lag] = v;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<std::complex<double>> spectrum(len);
  for (std::size_t f = 0; f < len; ++f) {
    std::complex<double> acc{};
    for (std::size_t t = 0; t < len; ++t) {
      acc += r[t] * std::polar(1.0, -two_pi * static_cast<double>(f * t % len) / len);
    }
    spectrum[f] = acc;
  }
  // Analytic signal: double positive frequencies, drop negative ones (len is odd).
  for (std::size_t f = 1; f < len; ++f) spectrum[f] *= (f <= (len - 1) / 2) ? 2.0 : 0.0;
  auto envelope_at = [&](std::size_t t) {
    std::complex<double> acc{};
    for (std::size_t f = 0; f < len; ++f) {
      acc += spectrum[f] * std::polar(1.0, two_pi * static_cast<double>(f * t % len) / len);
    }
    return std::abs(acc) / static_cast<double>(len);
  };
  const double peak = envelope_at(n - 1);
  const double level = peak / std::sqrt(2.0);
  double prev = peak;
  for (std::size_t lag = 1; lag < n; ++lag) {
    const double cur = envelope_at(n - 1 + lag);
    if (cur < level) {
      const double crossing = static_cast<double>(lag - 1) + (prev - level) / (prev - cur);
      return 2.0 * crossing;
    }
    prev = cur;
  }
  return 2.0 * static_cast<double>(n - 1);
}

DelayEstimates mf_delays(const ReceivedSignal& signal, std::span<const double> pulse,
                         std::size_t n_paths, double min_sep_seconds) {
  if (n_paths == 0) throw std::invalid_argument("n_paths must be at least 1");
  const double fs = signal.sample_rate;
  const double sep = min_sep_seconds * fs;
  if (!(sep >= 1.0)) throw std::invalid_argument("min_sep must be at least one sample");
  const auto c = cross_correlate(signal.samples, pulse);

  DelayEstimates est;
  std::vector<double> accepted;
  for (std::size_t p = 0; p < n_paths; ++p) {
    const auto k = pick_peak(c, accepted, sep);
    if (k < 0) break;
    accepted.push_back(static_cast<double>(k));
    const Peak peak = refine_parabolic(c, static_cast<std::size_t>(k));
    est.taus.push_back(peak.lag / fs);
    est.amplitudes.push_back(peak.value);
  }
  sort_estimates(est);
  return est;
}

DelayEstimates sage_delays(const ReceivedSignal& signal, std::span<const double> pulse,
                           std::size_t n_paths, const SageOptions& options, SageTrace* trace) {
  if (n_paths == 0) throw std::invalid_argument("n_paths must be at least 1");
  const double fs = signal.sample_rate;
  const std::span<const double> y = signal.samples;
  const std::size_t n = y.size();
  const double sep = options.min_sep_samples > 0.0 ? options.min_sep_samples : mainlobe_width(pulse);
  if (n < pulse.size()) throw std::invalid_argument("signal shorter than pulse");

  auto unit_copy = [&](double lag) {
    std::vector<double> w(n, 0.0);
    add_delayed(w, pulse, lag, 1.0);
    return w;
  };

  std::vector<double> lags;
  std::vector<double> amps;
  std::vector<std::vector<double>> components;  // amplitude-scaled path waveforms
  std::vector<double> residual(y.begin(), y.end());

  // Successive interference cancellation.
  for (std::size_t p = 0; p < n_paths; ++p) {
    const auto c = cross_correlate(residual, pulse);
    const auto k = pick_peak(c, lags, sep);
    if (k < 0) break;
    const double lag = refine_parabolic(c, static_cast<std::size_t>(k)).lag;
    auto w = unit_copy(lag);
    const double energy = dot(w, w);
    const double a = energy > 0.0 ? dot(residual, w) / energy : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= a;
      residual[i] -= w[i];
    }
    lags.push_back(lag);
    amps.push_back(a);
    components.push_back(std::move(w));
  }
  if (trace) trace->residual_energy.push_back(dot(residual, residual));

  DelayEstimates est;
  est.converged = false;
  const std::size_t paths = lags.size();
  std::vector<double> x(n);
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    double max_delta = 0.0;
    for (std::size_t l = 0; l < paths; ++l) {
      for (std::size_t i = 0; i < n; ++i) x[i] = residual[i] + components[l][i];
      // The other paths are already subtracted from x, so the single
      // largest peak is path l; no exclusion zone is needed here.
      const auto c = cross_correlate(x, pulse);
      const auto k = pick_peak(c, {}, sep);

      auto fit = [&](double lag) {
        auto w = unit_copy(lag);
        const double energy = dot(w, w);
        const double proj = dot(x, w);
        struct Fit {
          std::vector<double> w;
          double amplitude;
          double gain;  // residual energy removed by this path
        };
        if (!(energy > 0.0)) return Fit{std::move(w), 0.0, 0.0};
        return Fit{std::move(w), proj / energy, proj * proj / energy};
      };

      auto best = fit(lags[l]);
      double new_lag = lags[l];
      if (k >= 0) {
        const double candidate = refine_parabolic(c, static_cast<std::size_t>(k)).lag;
        auto alt = fit(candidate);
        if (alt.gain >= best.gain) {
          best = std::move(alt);
          new_lag = candidate;
        }
      }
      max_delta = std::max(max_delta, std::abs(new_lag - lags[l]));
      lags[l] = new_lag;
      amps[l] = best.amplitude;
      for (std::size_t i = 0; i < n; ++i) {
        components[l][i] = best.amplitude * best.w[i];
        residual[i] = x[i] - components[l][i];
      }
    }
    if (trace) trace->residual_energy.push_back(dot(residual, residual));
    est.iterations = iter;
    if (max_delta < options.tol_samples) {
      est.converged = true;
      break;
    }
  }
  if (paths == 0) est.converged = true;

  for (std::size_t l = 0; l < paths; ++l) {
    est.taus.push_back(lags[l] / fs);
    est.amplitudes.push_back(amps[l]);
  }
  sort_estimates(est);
  return est;
}

DelayEstimates strip_los(const DelayEstimates& est, const Scenario& scenario,
                         std::size_t receiver_index) {
  if (receiver_index >= scenario.receivers.size()) throw std::out_of_range("receiver index");
  DelayEstimates out = est;
  out.receiver_index = receiver_index;
  if (est.taus.empty()) return out;
  const double los = distance(scenario.emitter, scenario.receivers[receiver_index]) /
                     scenario.sound_speed;
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < est.taus.size(); ++i) {
    if (std::abs(est.taus[i] - los) < std::abs(est.taus[nearest] - los)) nearest = i;
  }
  out.taus.erase(out.taus.begin() + static_cast<std::ptrdiff_t>(nearest));
  out.amplitudes.erase(out.amplitudes.begin() + static_cast<std::ptrdiff_t>(nearest));
  return out;
}

}  // namespace cotans
