#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cbxor/image.hpp"

namespace cbxor::test {

/// Uniform random image from a std::mt19937_64 stream (test-only generator).
inline GrayImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::vector<std::uint8_t> data(w * h);
  for (auto& p : data) p = static_cast<std::uint8_t>(rng() & 0xFF);
  return GrayImage(w, h, std::move(data));
}

inline GrayImage constant_image(std::size_t w, std::size_t h, std::uint8_t v) {
  return GrayImage(w, h, v);
}

/// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cbxor_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cbxor::test
