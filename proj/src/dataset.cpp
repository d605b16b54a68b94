#include "cotans/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cotans/sampler.hpp"
#include "cotans/seeding.hpp"
#include "cotans/sweep.hpp"
#include "cotans/trial.hpp"

namespace cotans {

std::string DatasetPair::stem() const {
  return split + "/" + snr_label(snr_db) + "/" + trial_stem(trial_id);
}

std::uint64_t pair_seed(std::uint64_t seed, std::size_t split, std::size_t snr_index,
                        std::uint64_t trial_id) {
  return derive_seed(seed, {split, snr_index, trial_id});
}

DatasetManifest export_dataset(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                               const SplitCounts& counts, const std::vector<double>& snrs,
                               std::uint64_t seed) {
  validate(cfg);
  if (counts.train < 0 || counts.val < 0 || counts.test < 0) {
    throw std::invalid_argument("split counts must be non-negative");
  }
  DatasetManifest m;
  m.grid = cfg.grid;
  m.seed = seed;
  m.snrs = snrs;
  m.counts = counts;
  m.n_receivers = cfg.sampler.n_receivers;
  const int per_split[3] = {counts.train, counts.val, counts.test};
  for (std::size_t sp = 0; sp < kSplits.size(); ++sp) {
    for (std::size_t si = 0; si < snrs.size(); ++si) {
      for (int t = 0; t < per_split[sp]; ++t) {
        DatasetPair pair;
        pair.split = kSplits[sp];
        pair.snr_db = snrs[si];
        pair.trial_id = static_cast<std::uint64_t>(t);
        pair.seed = pair_seed(seed, sp, si, pair.trial_id);
        m.pairs.push_back(pair);
      }
    }
  }

  for (std::size_t sp = 0; sp < kSplits.size(); ++sp) {
    for (double snr : snrs) std::filesystem::create_directories(out_dir / kSplits[sp] / snr_label(snr));
  }
  parallel_for(m.pairs.size(), cfg.threads, [&](std::size_t i) {
    DatasetPair& pair = m.pairs[i];
    const Pipeline p = run_pipeline(cfg, pair.snr_db, pair.seed);
    pair.boundaries = p.scenario.boundaries;
    const auto base = out_dir / pair.stem();
    write_image(base.string() + ".cotans.f32", p.cotans.image);
    write_image(base.string() + ".bei.f32", render_bei(pair.boundaries, cfg.grid).image);
  });
  write_manifest(out_dir / "manifest.txt", m);
  return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "format=cotans-dataset\n"
      << "version=1\n"
      << "dtype=float32-le\n"
      << "layout=row-major-rho-by-theta\n"
      << "rho_max=" << format_number(m.grid.rho_max) << "\n"
      << "n_rho=" << m.grid.n_rho << "\n"
      << "n_theta=" << m.grid.n_theta << "\n"
      << "seed=" << m.seed << "\n"
      << "n_receivers=" << m.n_receivers << "\n"
      << "snr_db=";
  for (std::size_t i = 0; i < m.snrs.size(); ++i) out << (i ? "," : "") << format_number(m.snrs[i]);
  out << "\n"
      << "count.train=" << m.counts.train << "\n"
      << "count.val=" << m.counts.val << "\n"
      << "count.test=" << m.counts.test << "\n";
  // pair=<stem> <seed> <N> [<rho_m> <theta_rad>]...
  for (const auto& p : m.pairs) {
    out << "pair=" << p.stem() << ' ' << p.seed << ' ' << p.boundaries.size();
    for (const auto& b : p.boundaries) out << ' ' << format_number(b.rho) << ' ' << format_number(b.theta);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  DatasetManifest m;
  bool seen_format = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "format") {
        if (value != "cotans-dataset") fail("unknown format '" + value + "'");
        seen_format = true;
      } else if (key == "version") {
        if (value != "1") fail("unsupported version " + value);
      } else if (key == "rho_max") {
        m.grid.rho_max = std::stod(value);
      } else if (key == "n_rho") {
        m.grid.n_rho = std::stoi(value);
      } else if (key == "n_theta") {
        m.grid.n_theta = std::stoi(value);
      } else if (key == "seed") {
        m.seed = std::stoull(value);
      } else if (key == "n_receivers") {
        m.n_receivers = std::stoi(value);
      } else if (key == "snr_db") {
        m.snrs = parse_double_list(value);
      } else if (key == "count.train") {
        m.counts.train = std::stoi(value);
      } else if (key == "count.val") {
        m.counts.val = std::stoi(value);
      } else if (key == "count.test") {
        m.counts.test = std::stoi(value);
      } else if (key == "pair") {
        std::istringstream ss(value);
        std::string stem;
        std::size_t n = 0;
        DatasetPair p;
        if (!(ss >> stem >> p.seed >> n)) fail("malformed pair line");
        const auto s1 = stem.find('/');
        const auto s2 = stem.find('/', s1 == std::string::npos ? 0 : s1 + 1);
        if (s1 == std::string::npos || s2 == std::string::npos) fail("malformed pair stem");
        p.split = stem.substr(0, s1);
        p.snr_db = std::stod(stem.substr(s1 + 1, s2 - s1 - 1));
        p.trial_id = std::stoull(stem.substr(s2 + 1));
        for (std::size_t j = 0; j < n; ++j) {
          std::string rho, theta;
          if (!(ss >> rho >> theta)) fail("pair line lists too few boundaries");
          p.boundaries.push_back({std::stod(rho), std::stod(theta)});
        }
        if (p.stem() != stem) fail("pair stem does not round-trip: " + stem);
        m.pairs.push_back(std::move(p));
      }
      // dtype/layout are informative; unknown keys are ignored for forward compatibility.
    } catch (const std::logic_error& e) {
      fail(std::string("bad value for ") + key + ": " + e.what());
    }
  }
  if (!seen_format) throw std::runtime_error(path.string() + ": not a cotans dataset manifest");
  validate(m.grid);
  return m;
}

}  // namespace cotans
