#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>
#include <vector>

#include "cbxor/error.hpp"

namespace cbxor {

enum class DatasetKind {
  orl_pgm,   // root/<subject>/*.pgm
  iitd_bmp,  // root/<subject>/*.bmp
  flat,      // root/*.pgm and root/*.bmp
};

inline DatasetKind parse_dataset_kind(const std::string& text) {
  if (text == "orl-pgm") return DatasetKind::orl_pgm;
  if (text == "iitd-bmp") return DatasetKind::iitd_bmp;
  if (text == "flat") return DatasetKind::flat;
  throw UsageError("unknown dataset kind '" + text + "' (expected orl-pgm, iitd-bmp or flat)");
}

inline std::string to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::orl_pgm: return "orl-pgm";
    case DatasetKind::iitd_bmp: return "iitd-bmp";
    case DatasetKind::flat: return "flat";
  }
  return "?";
}

/// Orders "s2" before "s10": digit runs compare numerically.
inline bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
      nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

namespace detail {

inline std::string lower_ext(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

inline void collect(const std::filesystem::path& dir, bool want_pgm, bool want_bmp,
                    std::vector<std::filesystem::path>& out) {
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = lower_ext(entry.path());
    if ((want_pgm && ext == ".pgm") || (want_bmp && ext == ".bmp")) out.push_back(entry.path());
  }
}

}  // namespace detail

/// Image files of a dataset tree in deterministic natural order.
inline std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& root,
                                                       DatasetKind kind) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("dataset root '" + root.string() + "' is not a directory");

  std::vector<fs::path> files;
  try {
    if (kind == DatasetKind::flat) {
      detail::collect(root, true, true, files);
    } else {
      const bool pgm = kind == DatasetKind::orl_pgm;
      for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) detail::collect(entry.path(), pgm, !pgm, files);
    }
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("scanning dataset: ") + e.what());
  }

  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
    return natural_less(fs::relative(a, root).generic_string(), fs::relative(b, root).generic_string());
  });
  return files;
}

}  // namespace cbxor
