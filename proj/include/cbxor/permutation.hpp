#pragma once

// Seed-keyed pixel permutations.
//
// The generator is SplitMix64 (Steele, Lea & Flood 2014):
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Bounded draws use rejection sampling on the full 64-bit output, and the
// shuffle is the descending Fisher-Yates loop. Nothing here goes through
// <random> distributions, whose output is implementation-defined, so a key
// yields the same permutation on every platform.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cbxor/error.hpp"
#include "cbxor/image.hpp"

namespace cbxor {

/// SplitMix64 output finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  /// Uniform integer in [0, bound). bound must be nonzero.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // Values under `threshold` would bias the low residues.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

struct PermutationKey {
  std::uint64_t seed = 0;
  std::size_t length = 0;

  friend bool operator==(const PermutationKey&, const PermutationKey&) = default;
};

using Permutation = std::vector<std::size_t>;

inline Permutation derive_permutation(const PermutationKey& key) {
  if (key.length == 0) throw UsageError("permutation length must be positive");
  Permutation perm(key.length);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  SplitMix64 rng(key.seed);
  for (std::size_t i = perm.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

namespace detail {

inline void require_key_fits(const GrayImage& img, const PermutationKey& key) {
  if (key.length != img.size())
    throw FormatError("permutation length " + std::to_string(key.length) +
                      " does not match pixel count " + std::to_string(img.size()));
}

}  // namespace detail

/// Gathers through an explicit permutation: out[j] = img[perm[j]].
inline GrayImage apply_permutation(const GrayImage& img, const Permutation& perm) {
  if (perm.size() != img.size())
    throw FormatError("permutation length does not match pixel count");
  GrayImage out(img.width(), img.height());
  for (std::size_t j = 0; j < perm.size(); ++j) out[j] = img[perm[j]];
  return out;
}

/// Scatters back through an explicit permutation: out[perm[j]] = img[j].
inline GrayImage apply_inverse_permutation(const GrayImage& img, const Permutation& perm) {
  if (perm.size() != img.size())
    throw FormatError("permutation length does not match pixel count");
  GrayImage out(img.width(), img.height());
  for (std::size_t j = 0; j < perm.size(); ++j) out[perm[j]] = img[j];
  return out;
}

inline GrayImage permute_image(const GrayImage& img, const PermutationKey& key) {
  detail::require_key_fits(img, key);
  return apply_permutation(img, derive_permutation(key));
}

inline GrayImage inverse_permute_image(const GrayImage& img, const PermutationKey& key) {
  detail::require_key_fits(img, key);
  return apply_inverse_permutation(img, derive_permutation(key));
}

/// Per-item seed for batch runs: mix64(master + golden_gamma * (index + 1)).
constexpr std::uint64_t derive_item_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

/// Expands one seed into `count` slot seeds by drawing from SplitMix64(seed).
inline std::vector<std::uint64_t> expand_seeds(std::uint64_t seed, std::size_t count) {
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> out(count);
  for (auto& s : out) s = rng();
  return out;
}

}  // namespace cbxor
