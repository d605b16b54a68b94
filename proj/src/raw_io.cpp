#include "cotans/raw_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace cotans {

namespace {

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffU) << 24) | ((v & 0xff00U) << 8) | ((v >> 8) & 0xff00U) | (v >> 24);
  }
  return v;
}

}  // namespace

void write_f32(const std::filesystem::path& path, std::span<const double> values) {
  std::vector<std::uint32_t> words(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    words[i] = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<double> read_f32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % 4 != 0) throw std::runtime_error(path.string() + ": size is not a multiple of 4");
  std::vector<std::uint32_t> words(bytes / 4);
  in.seekg(0);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw std::runtime_error("read failed: " + path.string());
  std::vector<double> values(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    values[i] = std::bit_cast<float>(to_le(words[i]));
  }
  return values;
}

}  // namespace cotans
