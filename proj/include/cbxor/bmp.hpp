#pragma once

// Uncompressed Windows BMP (BITMAPINFOHEADER or later) to grayscale.
// Accepts 8-bit palettized and 24-bit BGR rasters; anything else is rejected.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbxor/error.hpp"
#include "cbxor/image.hpp"

namespace cbxor {

/// Integer BT.601 luma, round(0.299R + 0.587G + 0.114B), without floating point.
constexpr std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

namespace detail {

inline std::uint32_t read_le32(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 4 > b.size()) throw DecodeError("unexpected end of BMP data", b.size());
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

inline std::uint16_t read_le16(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 2 > b.size()) throw DecodeError("unexpected end of BMP data", b.size());
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

inline void put_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_le16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

}  // namespace detail

inline GrayImage load_bmp(std::span<const std::uint8_t> bytes) {
  using detail::read_le16;
  using detail::read_le32;

  constexpr std::size_t kFileHeader = 14;
  if (bytes.size() < 2 || bytes[0] != 'B' || bytes[1] != 'M')
    throw DecodeError("not a BMP file (bad magic)", 0);

  const std::uint32_t pixel_offset = read_le32(bytes, 10);
  const std::uint32_t info_size = read_le32(bytes, kFileHeader);
  if (info_size < 40)
    throw DecodeError("unsupported BMP info header of " + std::to_string(info_size) + " bytes",
                      kFileHeader);

  const auto raw_width = static_cast<std::int32_t>(read_le32(bytes, kFileHeader + 4));
  const auto raw_height = static_cast<std::int32_t>(read_le32(bytes, kFileHeader + 8));
  const std::uint16_t bpp = read_le16(bytes, kFileHeader + 14);
  const std::uint32_t compression = read_le32(bytes, kFileHeader + 16);
  const std::uint32_t colors_used = read_le32(bytes, kFileHeader + 32);

  if (compression != 0)
    throw DecodeError("unsupported compression (type " + std::to_string(compression) + ")",
                      kFileHeader + 16);
  if (bpp != 8 && bpp != 24)
    throw DecodeError("unsupported bit depth " + std::to_string(bpp), kFileHeader + 14);
  if (raw_width <= 0 || raw_height == 0 || raw_height == INT32_MIN)
    throw DecodeError("invalid BMP dimensions", kFileHeader + 4);

  const bool top_down = raw_height < 0;
  const auto width = static_cast<std::size_t>(raw_width);
  const auto height = static_cast<std::size_t>(top_down ? -raw_height : raw_height);

  std::vector<std::uint8_t> palette_gray;
  if (bpp == 8) {
    const std::size_t entries = colors_used == 0 ? 256 : colors_used;
    if (entries > 256) throw DecodeError("palette too large", kFileHeader + 32);
    const std::size_t palette_at = kFileHeader + info_size;
    if (palette_at + 4 * entries > bytes.size())
      throw DecodeError("truncated palette", bytes.size());
    palette_gray.reserve(entries);
    for (std::size_t i = 0; i < entries; ++i) {
      const auto* e = &bytes[palette_at + 4 * i];
      palette_gray.push_back(luma(e[2], e[1], e[0]));
    }
  }

  const std::size_t bytes_per_pixel = bpp / 8;
  const std::size_t stride = (width * bytes_per_pixel + 3) & ~std::size_t{3};
  if (pixel_offset > bytes.size() || (bytes.size() - pixel_offset) / stride < height)
    throw DecodeError("truncated pixel payload", bytes.size());

  std::vector<std::uint8_t> data(width * height);
  for (std::size_t row = 0; row < height; ++row) {
    const std::size_t src_row = top_down ? row : height - 1 - row;
    const std::size_t row_at = pixel_offset + src_row * stride;
    for (std::size_t x = 0; x < width; ++x) {
      std::uint8_t v;
      if (bpp == 8) {
        const std::uint8_t index = bytes[row_at + x];
        if (index >= palette_gray.size())
          throw DecodeError("palette index out of range", row_at + x);
        v = palette_gray[index];
      } else {
        const auto* p = &bytes[row_at + 3 * x];
        v = luma(p[2], p[1], p[0]);
      }
      data[row * width + x] = v;
    }
  }
  return GrayImage(width, height, std::move(data));
}

/// Writes an 8-bit bottom-up BMP with an identity gray palette.
inline std::vector<std::uint8_t> save_bmp(const GrayImage& img) {
  using detail::put_le16;
  using detail::put_le32;

  const std::size_t stride = (img.width() + 3) & ~std::size_t{3};
  const std::uint32_t pixel_offset = 14 + 40 + 256 * 4;
  const auto file_size = static_cast<std::uint32_t>(pixel_offset + stride * img.height());

  std::vector<std::uint8_t> out;
  out.reserve(file_size);
  out.push_back('B');
  out.push_back('M');
  put_le32(out, file_size);
  put_le32(out, 0);
  put_le32(out, pixel_offset);

  put_le32(out, 40);
  put_le32(out, static_cast<std::uint32_t>(img.width()));
  put_le32(out, static_cast<std::uint32_t>(img.height()));
  put_le16(out, 1);
  put_le16(out, 8);
  put_le32(out, 0);
  put_le32(out, static_cast<std::uint32_t>(stride * img.height()));
  put_le32(out, 2835);
  put_le32(out, 2835);
  put_le32(out, 256);
  put_le32(out, 0);

  for (unsigned i = 0; i < 256; ++i) {
    const auto g = static_cast<std::uint8_t>(i);
    out.insert(out.end(), {g, g, g, 0});
  }
  for (std::size_t row = img.height(); row-- > 0;) {
    for (std::size_t x = 0; x < img.width(); ++x) out.push_back(img.at(x, row));
    out.insert(out.end(), stride - img.width(), 0);
  }
  return out;
}

}  // namespace cbxor
