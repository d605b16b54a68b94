#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cotans/config.hpp"
#include "cotans/cotans_image.hpp"
#include "cotans/geometry.hpp"

namespace cotans {

/// Training set layout:
///   <out>/manifest.txt
///   <out>/<split>/<snr_db>/<trial_id>.cotans.f32   network input
///   <out>/<split>/<snr_db>/<trial_id>.bei.f32      target
struct DatasetPair {
  std::string split;
  double snr_db{0.0};
  std::uint64_t trial_id{0};
  std::uint64_t seed{0};
  std::vector<Boundary> boundaries;

  /// "<split>/<snr>/<trial_id>", relative to the dataset root.
  std::string stem() const;
};

struct SplitCounts {
  int train{0};
  int val{0};
  int test{0};
};

struct DatasetManifest {
  GridSpec grid;
  std::uint64_t seed{0};
  std::vector<double> snrs;
  SplitCounts counts;
  int n_receivers{0};
  std::vector<DatasetPair> pairs;
};

inline const std::array<const char*, 3> kSplits{"train", "val", "test"};

/// Seed of one pair; splits and SNRs draw independent scenarios.
std::uint64_t pair_seed(std::uint64_t seed, std::size_t split, std::size_t snr_index,
                        std::uint64_t trial_id);

/// Writes every pair and the manifest. Deterministic in cfg and seed.
DatasetManifest export_dataset(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                               const SplitCounts& counts, const std::vector<double>& snrs,
                               std::uint64_t seed);

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Throws std::runtime_error on a missing or malformed manifest.
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace cotans
