#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <vector>

#include "cbxor/bmp.hpp"
#include "cbxor/error.hpp"
#include "cbxor/image.hpp"
#include "cbxor/netpbm.hpp"

namespace cbxor {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return bytes;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

/// Decodes PGM or BMP, chosen by the leading magic bytes.
inline GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return load_bmp(bytes);
  return load_pgm(bytes);
}

inline GrayImage load_image(const std::filesystem::path& path) {
  try {
    return decode_image(read_file(path));
  } catch (const DecodeError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Writes BMP when the extension is .bmp, PGM otherwise.
inline void save_image(const std::filesystem::path& path, const GrayImage& img) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  write_file(path, ext == ".bmp" ? save_bmp(img) : save_pgm(img));
}

}  // namespace cbxor
