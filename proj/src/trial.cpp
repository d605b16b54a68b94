#include "cotans/trial.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "cotans/assignment.hpp"
#include "cotans/ls_baseline.hpp"
#include "cotans/sampler.hpp"
#include "cotans/seeding.hpp"

namespace cotans {

namespace {

struct PulseCache {
  std::vector<double> pulse;
  double mainlobe{0.0};
};

const PulseCache& cached_pulse(const PulseSpec& spec) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double, double>, PulseCache> cache;
  const auto key = std::make_tuple(spec.sample_rate, spec.duration, spec.band_lo, spec.band_hi);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    PulseCache entry;
    entry.pulse = synth_pulse(spec);
    entry.mainlobe = mainlobe_width(entry.pulse);
    it = cache.emplace(key, std::move(entry)).first;
  }
  return it->second;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::CotansClassical: return "cotans-classical";
    case Method::CotansNn: return "cotans-nn";
    case Method::Ls: return "ls";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  if (text == "cotans-classical" || text == "classical") return Method::CotansClassical;
  if (text == "cotans-nn" || text == "nn") return Method::CotansNn;
  if (text == "ls") return Method::Ls;
  throw std::invalid_argument("unknown method '" + text + "'");
}

std::uint64_t scenario_seed(std::uint64_t trial_seed) { return derive_seed(trial_seed, {0}); }

std::uint64_t noise_seed(std::uint64_t trial_seed, std::size_t receiver_index) {
  return derive_seed(trial_seed, {1, receiver_index});
}

Pipeline run_pipeline(const ExperimentConfig& cfg, const Scenario& scenario, double snr_db,
                      std::uint64_t trial_seed) {
  const PulseCache& pc = cached_pulse(cfg.pulse);
  const double fs = cfg.pulse.sample_rate;
  SageOptions sage = cfg.sage;
  if (sage.min_sep_samples <= 0.0) sage.min_sep_samples = pc.mainlobe;

  Pipeline p;
  p.scenario = scenario;
  for (std::size_t i = 0; i < scenario.receivers.size(); ++i) {
    const auto taps = channel_taps(scenario, i);
    p.signals.push_back(render_taps(taps, pc.pulse, fs, snr_db, noise_seed(trial_seed, i)));
    DelayEstimates est = cfg.front_end == FrontEnd::Sage
                             ? sage_delays(p.signals.back(), pc.pulse, cfg.n_paths, sage)
                             : mf_delays(p.signals.back(), pc.pulse, cfg.n_paths, sage.min_sep_samples / fs);
    est.receiver_index = i;
    if (!est.converged) ++p.sage_nonconverged;
    p.nlos.push_back(strip_los(est, scenario, i));
    p.delays.push_back(std::move(est));
  }
  const ArrayGeometry array{scenario.emitter, scenario.receivers, scenario.sound_speed};
  p.cotans = build_cotans(array, p.nlos, cfg.grid);
  return p;
}

Pipeline run_pipeline(const ExperimentConfig& cfg, double snr_db, std::uint64_t trial_seed) {
  return run_pipeline(cfg, sample_scenario(cfg.sampler, scenario_seed(trial_seed)), snr_db, trial_seed);
}

Assignment match_estimates(std::span<const Boundary> truth, std::span<const Boundary> est,
                           double rho_max) {
  std::vector<double> cost(truth.size() * est.size());
  for (std::size_t t = 0; t < truth.size(); ++t) {
    for (std::size_t e = 0; e < est.size(); ++e) {
      const double dr = (truth[t].rho - est[e].rho) / rho_max;
      const double dt = wrap_angle(truth[t].theta - est[e].theta) / std::numbers::pi;
      cost[t * est.size() + e] = dr * dr + dt * dt;
    }
  }
  Assignment a;
  a.pairs = min_cost_assignment(cost, truth.size(), est.size());
  std::vector<bool> truth_used(truth.size(), false), est_used(est.size(), false);
  for (const auto& [t, e] : a.pairs) {
    truth_used[t] = true;
    est_used[e] = true;
  }
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (!truth_used[t]) a.missed_truths.push_back(t);
  }
  for (std::size_t e = 0; e < est.size(); ++e) {
    if (!est_used[e]) a.unmatched_estimates.push_back(e);
  }
  return a;
}

void score_trial(TrialRecord& record, std::span<const Boundary> estimates, double rho_max) {
  record.estimates.assign(estimates.begin(), estimates.end());
  record.n_hat = static_cast<int>(estimates.size());
  const auto& truth = record.scenario.boundaries;
  const Assignment a = match_estimates(truth, estimates, rho_max);
  record.matches.clear();
  for (const auto& [t, e] : a.pairs) {
    record.matches.push_back({t, e, truth[t].rho - estimates[e].rho,
                              wrap_angle(truth[t].theta - estimates[e].theta)});
  }
  record.missed = a.missed_truths;
}

std::string trial_stem(std::uint64_t trial_id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(trial_id));
  return buf;
}

std::string snr_label(double snr_db) { return format_number(snr_db); }

BeiProvider file_bei_provider(const std::string& dir, const GridSpec& grid) {
  return [dir, grid](const CotansImage&, const TrialContext& ctx) {
    const auto path = std::filesystem::path(dir) / snr_label(ctx.snr_db) /
                      (trial_stem(ctx.trial_id) + ".pred.f32");
    return read_image(path, grid);
  };
}

BeiProvider oracle_bei_provider(const ExperimentConfig& cfg) {
  return [cfg](const CotansImage&, const TrialContext& ctx) {
    const Scenario s = sample_scenario(cfg.sampler, scenario_seed(ctx.seed));
    return render_bei(s.boundaries, cfg.grid).image;
  };
}

TrialRecord run_trial(const ExperimentConfig& cfg, double snr_db, std::uint64_t seed, Method method,
                      const BeiProvider& provider, std::uint64_t trial_id) {
  if (method == Method::CotansNn && !provider) {
    throw std::invalid_argument("cotans-nn needs predicted BEIs (provider missing)");
  }
  const Pipeline p = run_pipeline(cfg, snr_db, seed);

  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.seed = seed;
  rec.snr_db = snr_db;
  rec.scenario = p.scenario;
  rec.method = method;
  rec.diagnostics.skipped_curves = p.cotans.curves_skipped;
  rec.diagnostics.sage_nonconverged = p.sage_nonconverged;

  std::vector<Boundary> estimates;
  switch (method) {
    case Method::CotansClassical: {
      const ArrayGeometry array{p.scenario.emitter, p.scenario.receivers, p.scenario.sound_speed};
      for (const auto& d : decode_classical(array, p.nlos, cfg.grid, cfg.decoder, cfg.classical)) {
        estimates.push_back(d.boundary);
      }
      break;
    }
    case Method::CotansNn: {
      const RhoThetaImage img = provider(p.cotans, TrialContext{trial_id, seed, snr_db});
      for (const auto& d : decode_bei(img, cfg.decoder)) estimates.push_back(d.boundary);
      break;
    }
    case Method::Ls: {
      const auto echoes = label_echoes(p.scenario, p.nlos);
      for (const auto& b : ls_boundaries(p.scenario, echoes)) {
        if (b) estimates.push_back(*b);
        else ++rec.diagnostics.solver_failures;
      }
      break;
    }
  }
  score_trial(rec, estimates, cfg.grid.rho_max);
  return rec;
}

}  // namespace cotans
