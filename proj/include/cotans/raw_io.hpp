#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace cotans {

/// Writes values as little-endian IEEE float32, no header.
void write_f32(const std::filesystem::path& path, std::span<const double> values);

/// Reads a little-endian float32 file. Throws std::runtime_error on I/O
/// failure or when the byte count is not a multiple of 4.
std::vector<double> read_f32(const std::filesystem::path& path);

}  // namespace cotans
