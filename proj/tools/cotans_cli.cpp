#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cotans/acoustic_sim.hpp"
#include "cotans/bei_decoder.hpp"
#include "cotans/config.hpp"
#include "cotans/dataset.hpp"
#include "cotans/ls_baseline.hpp"
#include "cotans/sampler.hpp"
#include "cotans/seeding.hpp"
#include "cotans/sweep.hpp"
#include "cotans/trial.hpp"

namespace fs = std::filesystem;
using namespace cotans;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> settings;
};

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config_path.empty() ? ExperimentConfig{} : load_config(c.config_path);
  for (const auto& s : c.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Writes to `path`, or to stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  open_out(path) << text;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) throw std::invalid_argument("no methods given");
  return out;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  double snr_db{20.0};
  std::uint64_t trial{0};
  std::string method{"classical"};
  std::string out_dir{"trial"};
};

void write_boundaries(std::ostream& out, const std::vector<Boundary>& bs) {
  out << "index,rho_m,theta_deg\n";
  for (std::size_t k = 0; k < bs.size(); ++k) {
    out << k << ',' << format_number(bs[k].rho) << ',' << format_number(rad2deg(bs[k].theta)) << '\n';
  }
}

int run_simulate(const ExperimentConfig& cfg, const SimulateArgs& a) {
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  const std::uint64_t seed = trial_seed(cfg.seed, a.trial);
  const Pipeline p = run_pipeline(cfg, a.snr_db, seed);

  {
    auto out = open_out(dir / "scenario.txt");
    const Scenario& s = p.scenario;
    out << "trial_id=" << a.trial << "\nseed=" << seed << "\nsnr_db=" << format_number(a.snr_db)
        << "\nsound_speed=" << format_number(s.sound_speed) << "\nemitter=" << format_number(s.emitter.x)
        << ',' << format_number(s.emitter.y) << '\n';
    for (std::size_t i = 0; i < s.receivers.size(); ++i) {
      out << "receiver." << i << '=' << format_number(s.receivers[i].x) << ','
          << format_number(s.receivers[i].y) << '\n';
    }
    for (std::size_t j = 0; j < s.boundaries.size(); ++j) {
      out << "boundary." << j << '=' << format_number(s.boundaries[j].rho) << ','
          << format_number(rad2deg(s.boundaries[j].theta)) << '\n';
    }
  }
  for (std::size_t i = 0; i < p.signals.size(); ++i) {
    write_waveform(dir / ("rx" + std::to_string(i) + ".f32"), p.signals[i]);
  }
  {
    auto out = open_out(dir / "delays.csv");
    out << "receiver,kind,tau_s,amplitude\n";
    for (const auto& d : p.delays) {
      for (std::size_t k = 0; k < d.taus.size(); ++k) {
        out << d.receiver_index << ",all," << format_number(d.taus[k]) << ','
            << format_number(d.amplitudes[k]) << '\n';
      }
    }
    for (const auto& d : p.nlos) {
      for (std::size_t k = 0; k < d.taus.size(); ++k) {
        out << d.receiver_index << ",nlos," << format_number(d.taus[k]) << ','
            << format_number(k < d.amplitudes.size() ? d.amplitudes[k] : 0.0) << '\n';
      }
    }
  }
  write_image(dir / "cotans.f32", p.cotans.image);
  write_image(dir / "bei_truth.f32", render_bei(p.scenario.boundaries, cfg.grid).image);

  const Method method = parse_method(a.method);
  const BeiProvider provider = method == Method::CotansNn ? oracle_bei_provider(cfg) : BeiProvider{};
  const TrialRecord rec = run_trial(cfg, a.snr_db, seed, method, provider, a.trial);
  {
    auto out = open_out(dir / "estimates.csv");
    write_boundaries(out, rec.estimates);
  }
  {
    auto out = open_out(dir / "errors.csv");
    write_trials_csv(out, {rec});
  }
  std::cout << "trial " << a.trial << " (seed " << seed << ") at " << format_number(a.snr_db) << " dB: "
            << rec.scenario.boundaries.size() << " boundaries, " << to_string(method) << " found "
            << rec.n_hat << "\n";
  for (const auto& m : rec.matches) {
    std::cout << "  boundary " << m.truth << ": d_rho " << format_number(m.d_rho) << " m, d_theta "
              << format_number(rad2deg(m.d_theta)) << " deg\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string methods{"classical,ls"};
  std::string out{"-"};
  std::string trials_out;
  std::string chart;
  std::string pred_dir;
  bool nn_oracle{false};
};

int run_sweep_cmd(const ExperimentConfig& cfg, const SweepArgs& a) {
  const auto methods = parse_methods(a.methods);
  BeiProvider provider;
  if (!a.pred_dir.empty()) provider = file_bei_provider(a.pred_dir, cfg.grid);
  else if (a.nn_oracle) provider = oracle_bei_provider(cfg);
  const SweepResult r = run_sweep(cfg, methods, provider);
  std::ostringstream table;
  write_sweep_csv(table, r.rows);
  emit(a.out, table.str());
  if (!a.trials_out.empty()) {
    auto out = open_out(a.trials_out);
    write_trials_csv(out, r.records);
  }
  if (!a.chart.empty()) {
    auto out = open_out(a.chart);
    write_rmse_svg(out, r.rows);
  }
  return 0;
}

// -------------------------------------------------------------- dataset

struct DatasetArgs {
  std::string out_dir{"dataset"};
  int train{1000};
  int val{200};
  int test{200};
};

int run_dataset(const ExperimentConfig& cfg, const DatasetArgs& a) {
  const auto m = export_dataset(cfg, a.out_dir, {a.train, a.val, a.test}, cfg.snrs, cfg.seed);
  std::cerr << "wrote " << m.pairs.size() << " pairs to " << a.out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------- decode

struct DecodeArgs {
  std::string manifest;
  std::string root;
  std::string suffix{".pred.f32"};
  std::string split;
  std::string out{"-"};
  std::vector<std::string> files;
};

struct DecodeStats {
  std::size_t images{0};
  std::size_t count_ok{0};
  double sq_rho{0.0};
  std::size_t pairs{0};
};

void decode_one(std::ostream& out, const std::string& name, const RhoThetaImage& image,
                const DecoderOptions& options, const std::vector<Boundary>* truth, double rho_max,
                DecodeStats& stats) {
  const auto det = decode_bei(image, options);
  ++stats.images;
  if (det.empty()) out << name << ",0,,,,\n";
  for (std::size_t k = 0; k < det.size(); ++k) {
    out << name << ',' << det.size() << ',' << k << ',' << format_number(det[k].boundary.rho) << ','
        << format_number(rad2deg(det[k].boundary.theta)) << ',' << format_number(det[k].score) << '\n';
  }
  if (!truth) return;
  if (det.size() == truth->size()) ++stats.count_ok;
  std::vector<Boundary> est;
  for (const auto& d : det) est.push_back(d.boundary);
  const auto a = match_estimates(*truth, est, rho_max);
  for (const auto& [t, e] : a.pairs) {
    const double d = (*truth)[t].rho - est[e].rho;
    stats.sq_rho += d * d;
    ++stats.pairs;
  }
}

int run_decode(const ExperimentConfig& cfg, const DecodeArgs& a) {
  std::ostringstream out;
  out << "file,n_hat,index,rho_m,theta_deg,score\n";
  DecodeStats stats;
  if (!a.manifest.empty()) {
    const DatasetManifest m = load_manifest(a.manifest);
    const fs::path root = a.root.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.root);
    for (const auto& p : m.pairs) {
      if (!a.split.empty() && p.split != a.split) continue;
      const std::string name = p.stem() + a.suffix;
      decode_one(out, name, read_image(root / name, m.grid), cfg.decoder, &p.boundaries, m.grid.rho_max, stats);
    }
  }
  for (const auto& f : a.files) {
    decode_one(out, f, read_image(f, cfg.grid), cfg.decoder, nullptr, cfg.grid.rho_max, stats);
  }
  if (stats.images == 0) throw std::invalid_argument("nothing to decode: give --manifest or image files");
  emit(a.out, out.str());
  std::cerr << "decoded " << stats.images << " images";
  if (!a.manifest.empty()) {
    std::cerr << "; count accuracy " << format_number(static_cast<double>(stats.count_ok) / stats.images);
    if (stats.pairs) std::cerr << ", rho RMSE " << format_number(std::sqrt(stats.sq_rho / stats.pairs)) << " m";
  }
  std::cerr << "\n";
  return 0;
}

// ------------------------------------------------------------- ls-bench

struct LsBenchArgs {
  std::string sigmas{"0.01,0.02,0.05,0.1,0.2"};
  std::string out{"-"};
};

int run_ls_bench(const ExperimentConfig& cfg, const LsBenchArgs& a) {
  std::ostringstream out;
  out << "sigma_m,scenarios,boundaries,solver_failures,rho_rmse_m,theta_rmse_deg\n";
  for (const double sigma : parse_double_list(a.sigmas)) {
    double sr = 0.0, st = 0.0;
    std::size_t n = 0, boundaries = 0, failures = 0;
    for (int k = 0; k < cfg.trials; ++k) {
      const std::uint64_t seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(k));
      const Scenario s = sample_scenario(cfg.sampler, scenario_seed(seed));
      // Distance noise shares seeds across sigma levels.
      const auto est = ls_boundaries(s, gaussian_echoes(s, sigma, derive_seed(seed, {2})));
      for (std::size_t j = 0; j < s.boundaries.size(); ++j) {
        ++boundaries;
        if (!est[j]) {
          ++failures;
          continue;
        }
        const double dr = s.boundaries[j].rho - est[j]->rho;
        const double dt = rad2deg(std::remainder(s.boundaries[j].theta - est[j]->theta, 2.0 * std::numbers::pi));
        sr += dr * dr;
        st += dt * dt;
        ++n;
      }
    }
    out << format_number(sigma) << ',' << cfg.trials << ',' << boundaries << ',' << failures << ','
        << format_number(n ? std::sqrt(sr / n) : 0.0) << ',' << format_number(n ? std::sqrt(st / n) : 0.0)
        << '\n';
  }
  emit(a.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflector localization from multipath echoes"};
  app.fallthrough();
  Common common;
  app.add_option("-c,--config", common.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("-s,--set", common.settings, "override one setting, key=value (repeatable)");
  bool list_keys = false, dump = false;
  app.add_flag("--list-keys", list_keys, "print every configuration key and exit");
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run one trial and dump its intermediates");
  simulate->add_option("--snr", sim.snr_db, "SNR in dB");
  simulate->add_option("--trial", sim.trial, "trial id under the master seed");
  simulate->add_option("--method", sim.method, "classical, nn (ground-truth BEI) or ls");
  simulate->add_option("-o,--out", sim.out_dir, "output directory");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over methods and SNRs");
  sweep->add_option("--methods", sw.methods, "comma-separated: classical, nn, ls");
  sweep->add_option("-o,--out", sw.out, "summary CSV ('-' for stdout)");
  sweep->add_option("--trials-out", sw.trials_out, "per-boundary CSV");
  sweep->add_option("--chart", sw.chart, "SVG line chart of range RMSE vs SNR");
  auto* pred = sweep->add_option("--pred-dir", sw.pred_dir, "predicted BEIs for the nn method");
  sweep->add_flag("--nn-oracle", sw.nn_oracle, "use ground-truth BEIs for the nn method")->excludes(pred);

  DatasetArgs ds;
  auto* dataset = app.add_subcommand("dataset", "export COTANS/BEI training pairs");
  dataset->add_option("-o,--out", ds.out_dir, "output directory");
  dataset->add_option("--train", ds.train, "pairs per SNR in the train split");
  dataset->add_option("--val", ds.val, "pairs per SNR in the val split");
  dataset->add_option("--test", ds.test, "pairs per SNR in the test split");

  DecodeArgs dc;
  auto* decode = app.add_subcommand("decode", "decode BEI images into boundaries");
  decode->add_option("--manifest", dc.manifest, "dataset manifest; decodes every listed pair")
      ->check(CLI::ExistingFile);
  decode->add_option("--root", dc.root, "directory holding the images (default: manifest directory)");
  decode->add_option("--suffix", dc.suffix, "image file suffix after the pair stem");
  decode->add_option("--split", dc.split, "only this split (train, val or test)");
  decode->add_option("-o,--out", dc.out, "boundary CSV ('-' for stdout)");
  decode->add_option("files", dc.files, "image files on the configured grid");

  LsBenchArgs lb;
  auto* ls = app.add_subcommand("ls-bench", "LS range RMSE against Gaussian distance noise");
  ls->add_option("--sigmas", lb.sigmas, "comma-separated noise levels in meters");
  ls->add_option("-o,--out", lb.out, "CSV ('-' for stdout)");

  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);
  try {
    if (list_keys) {
      for (const auto& k : config_keys()) std::cout << k.key << "  " << k.description << "\n";
      return 0;
    }
    const ExperimentConfig cfg = resolve(common);
    if (dump) {
      std::cout << dump_config(cfg);
      return 0;
    }
    if (*simulate) return run_simulate(cfg, sim);
    if (*sweep) return run_sweep_cmd(cfg, sw);
    if (*dataset) return run_dataset(cfg, ds);
    if (*decode) return run_decode(cfg, dc);
    if (*ls) return run_ls_bench(cfg, lb);
    std::cerr << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
