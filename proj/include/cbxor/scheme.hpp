#pragma once

// (n,n) XOR-chain share scheme for cancelable templates.
//
// Enrollment, for secret S and covers C_1..C_{n-1}:
//   TS_1 = S,      TS_i = C_{i-1} ^ TS_{i-1}      (i = 2..n)
//   NS_1 = TS_1,   NS_i = TS_i ^ NS_{i-1}         (i = 2..n)
//   SS_i = T_left(NS_i)
//
// Authentication runs the exact inverse:
//   NS_i = T_right(SS_i)
//   TS_1 = NS_1,   TS_i = NS_i ^ NS_{i-1}
//   S = TS_1,      C_{i-1} = TS_i ^ TS_{i-1}      (i = 2..n)

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbxor/error.hpp"
#include "cbxor/image.hpp"
#include "cbxor/permutation.hpp"

namespace cbxor {

enum class MethodKind {
  m1,  // secret = original, covers = unrelated gray images
  m2,  // secret = original, covers = keyed permutations of the original
  m3,  // secret and covers are all keyed permutations of the original
};

inline std::string to_string(MethodKind m) {
  switch (m) {
    case MethodKind::m1: return "m1";
    case MethodKind::m2: return "m2";
    case MethodKind::m3: return "m3";
  }
  return "?";
}

inline MethodKind parse_method(const std::string& text) {
  if (text == "m1" || text == "M1") return MethodKind::m1;
  if (text == "m2" || text == "M2") return MethodKind::m2;
  if (text == "m3" || text == "M3") return MethodKind::m3;
  throw UsageError("unknown method '" + text + "' (expected m1, m2 or m3)");
}

/// Number of permutation seeds a method consumes for n shares.
constexpr std::size_t seed_count(MethodKind m, std::size_t n) noexcept {
  switch (m) {
    case MethodKind::m1: return 0;
    case MethodKind::m2: return n - 1;
    case MethodKind::m3: return n;
  }
  return 0;
}

struct SchemeParams {
  MethodKind method = MethodKind::m3;
  std::size_t n = 4;
  BitTransformKind bit_transform = Reverse8{};
  // M2: one seed per cover. M3: seeds[0] permutes the secret, seeds[i] cover i.
  std::vector<std::uint64_t> seeds;
  // M1 only: generates textured covers for slots not filled by supplied images.
  std::optional<std::uint64_t> texture_seed;

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

inline void validate(const SchemeParams& p) {
  if (p.n < 2) throw UsageError("share count must be at least 2, got " + std::to_string(p.n));
  validate(p.bit_transform);
  const std::size_t want = seed_count(p.method, p.n);
  if (p.seeds.size() != want)
    throw UsageError("method " + to_string(p.method) + " with n=" + std::to_string(p.n) +
                     " needs " + std::to_string(want) + " seeds, got " +
                     std::to_string(p.seeds.size()));
}

/// The n stored shares. `n` is the count the scheme was enrolled with, so a
/// set holding fewer images is detectably incomplete.
struct ShareSet {
  std::size_t n = 0;
  std::vector<GrayImage> shares;
  BitTransformKind bit_transform = Reverse8{};

  Dimensions dims() const { return shares.empty() ? Dimensions{} : shares.front().dims(); }
  friend bool operator==(const ShareSet&, const ShareSet&) = default;
};

struct ReconstructionResult {
  GrayImage secret;
  std::vector<GrayImage> covers;
};

struct CoverSet {
  GrayImage secret;
  std::vector<GrayImage> covers;
};

// ---------------------------------------------------------------------------
// Cover generation

inline GrayImage resize_nearest(const GrayImage& img, Dimensions to) {
  if (img.dims() == to) return img;
  GrayImage out(to.width, to.height);
  for (std::size_t y = 0; y < to.height; ++y) {
    const std::size_t sy = y * img.height() / to.height;
    for (std::size_t x = 0; x < to.width; ++x) {
      const std::size_t sx = x * img.width() / to.width;
      out.at(x, y) = img.at(sx, sy);
    }
  }
  return out;
}

/// Deterministic textured gray image: four octaves of integer value noise
/// (lattice cells of 16, 8, 4 and 2 pixels, weights 8:4:2:1) contrast
/// stretched to [0, 255]. Integer-only, so identical on every platform.
inline GrayImage synthetic_texture(std::size_t width, std::size_t height, std::uint64_t seed) {
  GrayImage probe(width, height);  // validates dimensions
  std::vector<std::uint32_t> acc(width * height, 0);

  constexpr std::size_t kCells[] = {16, 8, 4, 2};
  constexpr std::uint32_t kWeights[] = {8, 4, 2, 1};
  for (std::size_t octave = 0; octave < 4; ++octave) {
    const std::size_t cell = kCells[octave];
    const std::uint64_t octave_key = mix64(seed ^ mix64(octave + 1));
    auto lattice = [&](std::size_t gx, std::size_t gy) -> std::uint32_t {
      return static_cast<std::uint32_t>(mix64(octave_key + mix64((gy << 32) ^ gx)) & 0xFFu);
    };
    for (std::size_t y = 0; y < height; ++y) {
      const std::size_t gy = y / cell;
      const auto fy = static_cast<std::uint32_t>(y % cell);
      for (std::size_t x = 0; x < width; ++x) {
        const std::size_t gx = x / cell;
        const auto fx = static_cast<std::uint32_t>(x % cell);
        const std::uint32_t c = static_cast<std::uint32_t>(cell);
        const std::uint32_t top = lattice(gx, gy) * (c - fx) + lattice(gx + 1, gy) * fx;
        const std::uint32_t bottom = lattice(gx, gy + 1) * (c - fx) + lattice(gx + 1, gy + 1) * fx;
        const std::uint32_t v = top * (c - fy) + bottom * fy;  // scaled by c*c
        acc[y * width + x] += kWeights[octave] * (v * 64 / (c * c));
      }
    }
  }

  std::uint32_t lo = acc.front(), hi = acc.front();
  for (auto v : acc) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<std::uint8_t> data(acc.size());
  const std::uint32_t span = hi > lo ? hi - lo : 1;
  for (std::size_t i = 0; i < acc.size(); ++i)
    data[i] = static_cast<std::uint8_t>((static_cast<std::uint64_t>(acc[i] - lo) * 255 + span / 2) / span);
  return GrayImage(width, height, std::move(data));
}

/// Builds the secret and the n-1 covers for the chosen method.
///
/// M1 uses `supplied_covers` first, each nearest-neighbour resized to the
/// original's dimensions; any remaining slots are filled with
/// synthetic_texture() keyed by texture_seed (slot i uses
/// derive_item_seed(texture_seed, i)).
inline CoverSet make_covers(const GrayImage& original, const SchemeParams& params,
                            std::span<const GrayImage> supplied_covers = {}) {
  validate(params);
  if (original.size() < 2)
    throw FormatError("original must have at least 2 pixels, got " + to_string(original.dims()));

  const std::size_t cover_count = params.n - 1;
  const std::size_t len = original.size();
  CoverSet out{original, {}};
  out.covers.reserve(cover_count);

  switch (params.method) {
    case MethodKind::m1: {
      if (supplied_covers.size() > cover_count)
        throw UsageError("M1 with n=" + std::to_string(params.n) + " takes at most " +
                         std::to_string(cover_count) + " cover images, got " +
                         std::to_string(supplied_covers.size()));
      for (const auto& c : supplied_covers) out.covers.push_back(resize_nearest(c, original.dims()));
      if (out.covers.size() < cover_count && !params.texture_seed)
        throw UsageError("M1 needs " + std::to_string(cover_count) +
                         " cover images or a texture seed");
      for (std::size_t i = out.covers.size(); i < cover_count; ++i)
        out.covers.push_back(synthetic_texture(original.width(), original.height(),
                                               derive_item_seed(*params.texture_seed, i)));
      break;
    }
    case MethodKind::m2:
      for (std::size_t i = 0; i < cover_count; ++i)
        out.covers.push_back(permute_image(original, {params.seeds[i], len}));
      break;
    case MethodKind::m3:
      out.secret = permute_image(original, {params.seeds[0], len});
      for (std::size_t i = 0; i < cover_count; ++i)
        out.covers.push_back(permute_image(original, {params.seeds[i + 1], len}));
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enrollment / authentication

struct EnrollmentTrace {
  std::vector<GrayImage> temporary;  // TS_1..TS_n
  std::vector<GrayImage> noisy;      // NS_1..NS_n
  ShareSet shares;                   // SS_1..SS_n
};

inline EnrollmentTrace enroll_with_trace(const GrayImage& secret, std::span<const GrayImage> covers,
                                         const BitTransformKind& bit_transform) {
  validate(bit_transform);
  const std::size_t n = covers.size() + 1;
  if (n < 2) throw UsageError("enrollment needs at least one cover image (n >= 2)");
  for (const auto& c : covers) require_same_dims(secret, c);

  EnrollmentTrace t;
  t.temporary.reserve(n);
  t.noisy.reserve(n);
  t.temporary.push_back(secret);
  t.noisy.push_back(secret);
  for (std::size_t i = 1; i < n; ++i) {
    t.temporary.push_back(xor_images(covers[i - 1], t.temporary[i - 1]));
    t.noisy.push_back(xor_images(t.temporary[i], t.noisy[i - 1]));
  }

  t.shares.n = n;
  t.shares.bit_transform = bit_transform;
  t.shares.shares.reserve(n);
  for (const auto& ns : t.noisy)
    t.shares.shares.push_back(cbxor::bit_transform(ns, bit_transform, BitDirection::left));
  return t;
}

inline ShareSet enroll(const GrayImage& secret, std::span<const GrayImage> covers,
                       const BitTransformKind& bit_transform = Reverse8{}) {
  return enroll_with_trace(secret, covers, bit_transform).shares;
}

/// Reconstructs the secret and all covers. Refuses an incomplete set: every
/// one of the n shares is required.
inline ReconstructionResult authenticate(const ShareSet& set) {
  if (set.n < 2) throw UsageError("share set must declare n >= 2");
  if (set.shares.size() < set.n)
    throw IntegrityError("missing share: " + std::to_string(set.shares.size()) + " of " +
                         std::to_string(set.n) + " present, all are required");
  if (set.shares.size() > set.n)
    throw UsageError("share set holds " + std::to_string(set.shares.size()) +
                     " images but declares n=" + std::to_string(set.n));
  for (const auto& s : set.shares) require_same_dims(set.shares.front(), s);

  std::vector<GrayImage> noisy;
  noisy.reserve(set.n);
  for (const auto& s : set.shares)
    noisy.push_back(bit_transform(s, set.bit_transform, BitDirection::right));

  std::vector<GrayImage> temporary;
  temporary.reserve(set.n);
  temporary.push_back(noisy[0]);
  for (std::size_t i = 1; i < set.n; ++i) temporary.push_back(xor_images(noisy[i], noisy[i - 1]));

  ReconstructionResult out{temporary[0], {}};
  out.covers.reserve(set.n - 1);
  for (std::size_t i = 1; i < set.n; ++i) out.covers.push_back(xor_images(temporary[i], temporary[i - 1]));
  return out;
}

/// Undoes the secret-slot permutation for M3; identity for M1 and M2.
inline GrayImage reveal_original(const ReconstructionResult& result, const SchemeParams& params) {
  if (params.method != MethodKind::m3) return result.secret;
  if (params.seeds.empty()) throw UsageError("M3 reveal requires the secret-slot seed");
  return inverse_permute_image(result.secret, {params.seeds[0], result.secret.size()});
}

struct Enrollment {
  SchemeParams params;
  CoverSet inputs;
  ShareSet shares;
};

/// make_covers followed by enroll.
inline Enrollment enroll_original(const GrayImage& original, const SchemeParams& params,
                                  std::span<const GrayImage> supplied_covers = {}) {
  Enrollment e{params, make_covers(original, params, supplied_covers), {}};
  e.shares = enroll(e.inputs.secret, e.inputs.covers, params.bit_transform);
  return e;
}

/// Seeds for a method drawn deterministically from one master seed.
inline SchemeParams params_from_master(MethodKind method, std::size_t n, std::uint64_t master,
                                       BitTransformKind bit_transform = Reverse8{}) {
  SchemeParams p;
  p.method = method;
  p.n = n;
  p.bit_transform = bit_transform;
  if (n >= 2) p.seeds = expand_seeds(master, seed_count(method, n));
  if (method == MethodKind::m1) p.texture_seed = master;
  return p;
}

}  // namespace cbxor
