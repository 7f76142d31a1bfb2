#pragma once

// Enrollment manifest: the stored record that binds a user to a share set.
//
//   {
//     "schema": 1,
//     "user_id": "s1_1",
//     "method": "m3",
//     "n": 4,
//     "bit_transform": "reverse8",
//     "seeds": ["1234", ...],          decimal u64 strings
//     "texture_seed": "99",            M1 only, optional
//     "dims": {"width": 92, "height": 112},
//     "share_files": ["s1_1_share_1.pgm", ...],   relative to the manifest
//     "digest_algorithm": "sha256",
//     "content_digests": ["<hex>", ...]           over raw pixel bytes
//   }

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbxor/error.hpp"
#include "cbxor/image.hpp"
#include "cbxor/image_io.hpp"
#include "cbxor/scheme.hpp"

namespace cbxor {

inline constexpr int kManifestSchema = 1;

struct EnrollmentManifest {
  std::string user_id;
  MethodKind method = MethodKind::m3;
  std::size_t n = 0;
  BitTransformKind bit_transform = Reverse8{};
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> texture_seed;
  Dimensions dims;
  std::vector<std::string> share_files;
  std::string digest_algorithm = "sha256";
  std::vector<std::string> content_digests;

  SchemeParams params() const {
    return SchemeParams{method, n, bit_transform, seeds, texture_seed};
  }

  friend bool operator==(const EnrollmentManifest&, const EnrollmentManifest&) = default;
};

inline std::uint64_t parse_u64(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("'" + text + "' is not a decimal unsigned 64-bit integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno == ERANGE || *end != '\0')
    throw UsageError("'" + text + "' does not fit in 64 bits");
  return static_cast<std::uint64_t>(v);
}

inline void validate(const EnrollmentManifest& m) {
  if (m.n < 2) throw FormatError("manifest: n must be at least 2");
  if (m.share_files.size() != m.n || m.content_digests.size() != m.n)
    throw FormatError("manifest: share_files and content_digests must both hold n entries");
  if (m.seeds.size() != seed_count(m.method, m.n))
    throw FormatError("manifest: seed count does not match method " + to_string(m.method));
  if (m.dims.width == 0 || m.dims.height == 0) throw FormatError("manifest: zero dimension");
  if (m.digest_algorithm != "sha256")
    throw FormatError("manifest: unsupported digest algorithm '" + m.digest_algorithm + "'");
}

inline nlohmann::json to_json(const EnrollmentManifest& m) {
  nlohmann::json j;
  j["schema"] = kManifestSchema;
  j["user_id"] = m.user_id;
  j["method"] = to_string(m.method);
  j["n"] = m.n;
  j["bit_transform"] = to_string(m.bit_transform);
  auto seeds = nlohmann::json::array();
  for (auto s : m.seeds) seeds.push_back(std::to_string(s));
  j["seeds"] = std::move(seeds);
  if (m.texture_seed) j["texture_seed"] = std::to_string(*m.texture_seed);
  j["dims"] = {{"width", m.dims.width}, {"height", m.dims.height}};
  j["share_files"] = m.share_files;
  j["digest_algorithm"] = m.digest_algorithm;
  j["content_digests"] = m.content_digests;
  return j;
}

inline EnrollmentManifest manifest_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<int>() != kManifestSchema)
      throw FormatError("manifest: unsupported schema " + j.at("schema").dump());
    EnrollmentManifest m;
    m.user_id = j.at("user_id").get<std::string>();
    m.method = parse_method(j.at("method").get<std::string>());
    m.n = j.at("n").get<std::size_t>();
    m.bit_transform = parse_bit_transform(j.at("bit_transform").get<std::string>());
    for (const auto& s : j.at("seeds")) m.seeds.push_back(parse_u64(s.get<std::string>()));
    if (j.contains("texture_seed"))
      m.texture_seed = parse_u64(j.at("texture_seed").get<std::string>());
    m.dims.width = j.at("dims").at("width").get<std::size_t>();
    m.dims.height = j.at("dims").at("height").get<std::size_t>();
    m.share_files = j.at("share_files").get<std::vector<std::string>>();
    m.digest_algorithm = j.at("digest_algorithm").get<std::string>();
    m.content_digests = j.at("content_digests").get<std::vector<std::string>>();
    validate(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  } catch (const UsageError& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

inline std::string serialize_manifest(const EnrollmentManifest& m) {
  return to_json(m).dump(2) + "\n";
}

inline EnrollmentManifest parse_manifest(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }
  return manifest_from_json(j);
}

inline EnrollmentManifest load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_manifest(std::string(bytes.begin(), bytes.end()));
}

inline void save_manifest(const std::filesystem::path& path, const EnrollmentManifest& m) {
  const auto text = serialize_manifest(m);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace cbxor
