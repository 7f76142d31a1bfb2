#pragma once

// PGM (netpbm graymap) reader and writer. Reads P2 (ASCII) and P5 (binary)
// with maxval up to 255; always writes P5 with maxval 255.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cbxor/error.hpp"
#include "cbxor/image.hpp"

namespace cbxor {

namespace detail {

class PgmCursor {
 public:
  explicit PgmCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!at_end()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    if (at_end()) throw DecodeError(std::string("unexpected end of data reading ") + what, pos_);
    if (!std::isdigit(bytes_[pos_]))
      throw DecodeError(std::string("expected decimal ") + what, pos_);
    std::size_t value = 0;
    while (!at_end() && std::isdigit(bytes_[pos_])) {
      const std::size_t digit = bytes_[pos_] - '0';
      if (value > (std::numeric_limits<std::size_t>::max() - digit) / 10)
        throw DecodeError(std::string(what) + " overflows", start);
      value = value * 10 + digit;
      ++pos_;
    }
    return value;
  }

  std::uint8_t byte_at(std::size_t i) const { return bytes_[i]; }
  std::size_t size() const noexcept { return bytes_.size(); }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw DecodeError("not a P2/P5 PGM (bad magic)", 0);
  const bool binary = bytes[1] == '5';

  detail::PgmCursor cur(bytes);
  cur.advance(2);
  if (!cur.at_end() && !std::isspace(cur.byte_at(cur.offset())) && cur.byte_at(cur.offset()) != '#')
    throw DecodeError("missing whitespace after magic", cur.offset());

  cur.skip_space_and_comments();
  const std::size_t header_width_at = cur.offset();
  const std::size_t width = cur.read_uint("width");
  const std::size_t height = cur.read_uint("height");
  if (width == 0 || height == 0)
    throw DecodeError("zero image dimension", header_width_at);
  cur.skip_space_and_comments();
  const std::size_t maxval_at = cur.offset();
  const std::size_t maxval = cur.read_uint("maxval");
  if (maxval == 0 || maxval > 255)
    throw DecodeError("maxval " + std::to_string(maxval) + " outside [1,255]", maxval_at);
  if (width > std::numeric_limits<std::size_t>::max() / height)
    throw DecodeError("image dimensions overflow", header_width_at);

  const std::size_t count = width * height;
  std::vector<std::uint8_t> data;
  data.reserve(std::min(count, bytes.size()));

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (cur.at_end() || !std::isspace(cur.byte_at(cur.offset())))
      throw DecodeError("missing whitespace before raster", cur.offset());
    cur.advance(1);
    const std::size_t start = cur.offset();
    const std::size_t available = cur.size() - start;
    if (available < count)
      throw DecodeError("truncated pixel payload: expected " + std::to_string(count) +
                            " bytes, found " + std::to_string(available),
                        cur.size());
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = cur.byte_at(start + i);
      if (v > maxval) throw DecodeError("pixel value exceeds maxval", start + i);
      data.push_back(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      cur.skip_space_and_comments();
      if (cur.at_end())
        throw DecodeError("truncated pixel payload: expected " + std::to_string(count) +
                              " samples, found " + std::to_string(i),
                          cur.offset());
      const std::size_t at = cur.offset();
      const std::size_t v = cur.read_uint("sample");
      if (v > maxval) throw DecodeError("pixel value exceeds maxval", at);
      data.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return GrayImage(width, height, std::move(data));
}

inline std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto px = img.pixels();
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

}  // namespace cbxor
