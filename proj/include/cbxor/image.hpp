#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cbxor/error.hpp"

namespace cbxor {

struct Dimensions {
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t pixel_count() const noexcept { return width * height; }
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

inline std::string to_string(const Dimensions& d) {
  return std::to_string(d.width) + "x" + std::to_string(d.height);
}

/// Row-major 8-bit grayscale raster. Width and height are always positive and
/// the pixel buffer always holds exactly width*height bytes.
class GrayImage {
 public:
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : dims_{width, height} {
    check_dims();
    data_.assign(dims_.pixel_count(), fill);
  }

  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
      : dims_{width, height}, data_(std::move(data)) {
    check_dims();
    if (data_.size() != dims_.pixel_count())
      throw FormatError("pixel buffer holds " + std::to_string(data_.size()) +
                        " bytes, expected " + std::to_string(dims_.pixel_count()));
  }

  std::size_t width() const noexcept { return dims_.width; }
  std::size_t height() const noexcept { return dims_.height; }
  Dimensions dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const std::uint8_t> pixels() const noexcept { return data_; }
  std::span<std::uint8_t> pixels() noexcept { return data_; }

  std::uint8_t at(std::size_t x, std::size_t y) const { return data_.at(y * dims_.width + x); }
  std::uint8_t& at(std::size_t x, std::size_t y) { return data_.at(y * dims_.width + x); }

  std::uint8_t operator[](std::size_t i) const noexcept { return data_[i]; }
  std::uint8_t& operator[](std::size_t i) noexcept { return data_[i]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  void check_dims() const {
    if (dims_.width == 0 || dims_.height == 0)
      throw FormatError("image dimensions must be positive, got " + to_string(dims_));
  }

  Dimensions dims_;
  std::vector<std::uint8_t> data_;
};

inline void require_same_dims(const GrayImage& a, const GrayImage& b) {
  if (a.dims() != b.dims())
    throw FormatError("dimension mismatch: " + to_string(a.dims()) + " vs " +
                      to_string(b.dims()));
}

inline GrayImage xor_images(const GrayImage& a, const GrayImage& b) {
  require_same_dims(a, b);
  GrayImage out = a;
  auto dst = out.pixels();
  auto src = b.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
  return out;
}

// ---------------------------------------------------------------------------
// Per-pixel bit transforms applied to noisy shares (left) and undone on
// secret shares (right).

struct Reverse8 {
  friend bool operator==(const Reverse8&, const Reverse8&) = default;
};

/// Circular rotation by `bits` in [1, 7].
struct Rotate {
  unsigned bits = 1;
  friend bool operator==(const Rotate&, const Rotate&) = default;
};

using BitTransformKind = std::variant<Reverse8, Rotate>;

enum class BitDirection { left, right };

constexpr std::uint8_t reverse_bits(std::uint8_t v) noexcept {
  v = static_cast<std::uint8_t>((v & 0xF0u) >> 4 | (v & 0x0Fu) << 4);
  v = static_cast<std::uint8_t>((v & 0xCCu) >> 2 | (v & 0x33u) << 2);
  v = static_cast<std::uint8_t>((v & 0xAAu) >> 1 | (v & 0x55u) << 1);
  return v;
}

constexpr std::uint8_t rotate_left(std::uint8_t v, unsigned k) noexcept {
  k &= 7u;
  return static_cast<std::uint8_t>((v << k) | (v >> ((8u - k) & 7u)));
}

constexpr std::uint8_t rotate_right(std::uint8_t v, unsigned k) noexcept {
  k &= 7u;
  return static_cast<std::uint8_t>((v >> k) | (v << ((8u - k) & 7u)));
}

inline void validate(const BitTransformKind& kind) {
  if (const auto* r = std::get_if<Rotate>(&kind); r && (r->bits < 1 || r->bits > 7))
    throw UsageError("rotate amount must be in [1,7], got " + std::to_string(r->bits));
}

inline std::string to_string(const BitTransformKind& kind) {
  if (const auto* r = std::get_if<Rotate>(&kind)) return "rotate:" + std::to_string(r->bits);
  return "reverse8";
}

/// Parses "reverse8" or "rotate:K".
inline BitTransformKind parse_bit_transform(const std::string& text) {
  if (text == "reverse8") return Reverse8{};
  const std::string prefix = "rotate:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (digits.size() == 1 && digits[0] >= '1' && digits[0] <= '7')
      return Rotate{static_cast<unsigned>(digits[0] - '0')};
  }
  throw UsageError("unknown bit transform '" + text + "' (expected reverse8 or rotate:1..7)");
}

inline GrayImage bit_transform(const GrayImage& img, const BitTransformKind& kind,
                               BitDirection direction) {
  validate(kind);
  std::uint8_t table[256];
  for (unsigned v = 0; v < 256; ++v) {
    const auto b = static_cast<std::uint8_t>(v);
    if (const auto* r = std::get_if<Rotate>(&kind)) {
      table[v] = direction == BitDirection::left ? rotate_left(b, r->bits)
                                                 : rotate_right(b, r->bits);
    } else {
      table[v] = reverse_bits(b);
    }
  }
  GrayImage out = img;
  for (auto& p : out.pixels()) p = table[p];
  return out;
}

}  // namespace cbxor
