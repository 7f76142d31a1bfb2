#pragma once

// The four CLI operations as library calls. Each throws cbxor::Error on
// failure; Error::exit_code() is the process exit status the CLI reports.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbxor/dataset.hpp"
#include "cbxor/digest.hpp"
#include "cbxor/error.hpp"
#include "cbxor/image.hpp"
#include "cbxor/image_io.hpp"
#include "cbxor/manifest.hpp"
#include "cbxor/metrics.hpp"
#include "cbxor/permutation.hpp"
#include "cbxor/report.hpp"
#include "cbxor/scheme.hpp"

namespace cbxor {

namespace fs = std::filesystem;

/// Where permutation seeds come from. Neither set means fresh random seeds.
struct SeedSource {
  std::optional<std::uint64_t> master;              // expanded with expand_seeds()
  std::optional<std::vector<std::uint64_t>> list;   // used verbatim

  bool is_auto() const noexcept { return !master && !list; }
};

inline std::uint64_t random_master_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Resolves scheme parameters. For M1 an explicit list may carry a single
/// texture seed; for M2/M3 it must hold exactly seed_count(method, n) seeds.
inline SchemeParams resolve_params(MethodKind method, std::size_t n, const BitTransformKind& bt,
                                   const SeedSource& src) {
  if (n < 2) throw UsageError("--shares must be at least 2, got " + std::to_string(n));
  validate(bt);
  if (src.master && src.list) throw UsageError("--seed and --seeds are mutually exclusive");

  if (src.list) {
    SchemeParams p{method, n, bt, {}, std::nullopt};
    if (method == MethodKind::m1) {
      if (src.list->size() > 1) throw UsageError("M1 takes at most one seed (the texture seed)");
      if (!src.list->empty()) p.texture_seed = src.list->front();
    } else {
      p.seeds = *src.list;
    }
    validate(p);
    return p;
  }
  const std::uint64_t master = src.master ? *src.master : random_master_seed();
  return params_from_master(method, n, master, bt);
}

inline std::string sanitize_file_stem(const std::string& id) {
  std::string out = id.empty() ? "user" : id;
  for (auto& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return out;
}

inline std::string pixel_digest(const GrayImage& img) { return sha256_hex(img.pixels()); }

inline void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

// ---------------------------------------------------------------------------
// enroll

struct EnrollOptions {
  fs::path input;
  MethodKind method = MethodKind::m3;
  std::size_t n = 4;
  BitTransformKind bit_transform = Reverse8{};
  SeedSource seeds;
  fs::path out_dir = ".";
  std::string user_id;           // defaults to the input file stem
  std::vector<fs::path> covers;  // M1 only
};

struct EnrollOutcome {
  EnrollmentManifest manifest;
  fs::path manifest_path;
};

inline EnrollOutcome cmd_enroll(const EnrollOptions& opt) {
  const SchemeParams params = resolve_params(opt.method, opt.n, opt.bit_transform, opt.seeds);
  if (!opt.covers.empty() && opt.method != MethodKind::m1)
    throw UsageError("--cover images only apply to method m1");

  const GrayImage original = load_image(opt.input);
  std::vector<GrayImage> covers;
  for (const auto& c : opt.covers) covers.push_back(load_image(c));

  const Enrollment e = enroll_original(original, params, covers);

  EnrollmentManifest m;
  m.user_id = opt.user_id.empty() ? opt.input.stem().string() : opt.user_id;
  m.method = params.method;
  m.n = params.n;
  m.bit_transform = params.bit_transform;
  m.seeds = params.seeds;
  m.texture_seed = params.method == MethodKind::m1 ? params.texture_seed : std::nullopt;
  m.dims = original.dims();
  const std::string stem = sanitize_file_stem(m.user_id);
  for (std::size_t i = 0; i < e.shares.shares.size(); ++i) {
    m.share_files.push_back(stem + "_share_" + std::to_string(i + 1) + ".pgm");
    m.content_digests.push_back(pixel_digest(e.shares.shares[i]));
  }

  ensure_directory(opt.out_dir);
  for (std::size_t i = 0; i < e.shares.shares.size(); ++i)
    write_file(opt.out_dir / m.share_files[i], save_pgm(e.shares.shares[i]));
  EnrollOutcome out{m, opt.out_dir / (stem + ".manifest.json")};
  save_manifest(out.manifest_path, m);
  return out;
}

// ---------------------------------------------------------------------------
// share loading shared by authenticate and evaluate

/// Loads every share named by the manifest, checking presence first, then
/// decoding, dimensions and content digest. Any failure aborts the whole load.
inline ShareSet load_shares(const EnrollmentManifest& m, const fs::path& share_dir) {
  std::vector<std::string> missing;
  for (const auto& f : m.share_files) {
    std::error_code ec;
    if (!fs::is_regular_file(share_dir / f, ec)) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& f : missing) list += (list.empty() ? "" : ", ") + f;
    throw IntegrityError("missing share: " + std::to_string(missing.size()) + " of " +
                         std::to_string(m.n) + " absent (" + list + "); all shares are required");
  }

  ShareSet set{m.n, {}, m.bit_transform};
  for (std::size_t i = 0; i < m.n; ++i) {
    const fs::path path = share_dir / m.share_files[i];
    GrayImage img = load_image(path);
    if (img.dims() != m.dims)
      throw FormatError(path.string() + ": dimensions " + to_string(img.dims()) +
                        " differ from manifest " + to_string(m.dims));
    if (pixel_digest(img) != m.content_digests[i])
      throw IntegrityError(path.string() + ": content digest mismatch (share altered)");
    set.shares.push_back(std::move(img));
  }
  return set;
}

// ---------------------------------------------------------------------------
// authenticate

struct AuthenticateOptions {
  fs::path manifest;
  std::optional<fs::path> share_dir;  // defaults to the manifest's directory
  std::optional<SeedSource> reveal;   // seeds that undo the M3 secret permutation
  fs::path out_dir = ".";
};

struct AuthenticateOutcome {
  EnrollmentManifest manifest;
  ReconstructionResult result;
  std::optional<GrayImage> original;
  std::vector<fs::path> written;
};

inline AuthenticateOutcome cmd_authenticate(const AuthenticateOptions& opt) {
  const EnrollmentManifest m = load_manifest(opt.manifest);
  const fs::path dir = opt.share_dir ? *opt.share_dir : opt.manifest.parent_path();
  const ShareSet set = load_shares(m, dir.empty() ? fs::path(".") : dir);

  AuthenticateOutcome out{m, authenticate(set), std::nullopt, {}};
  if (opt.reveal && m.method == MethodKind::m3) {
    if (opt.reveal->is_auto()) throw UsageError("reveal needs --seed or --seeds");
    const SchemeParams p = resolve_params(m.method, m.n, m.bit_transform, *opt.reveal);
    out.original = reveal_original(out.result, p);
  }

  ensure_directory(opt.out_dir);
  const std::string stem = sanitize_file_stem(m.user_id);
  auto emit = [&](const std::string& name, const GrayImage& img) {
    const fs::path p = opt.out_dir / (stem + "_" + name + ".pgm");
    write_file(p, save_pgm(img));
    out.written.push_back(p);
  };
  emit("secret", out.result.secret);
  for (std::size_t i = 0; i < out.result.covers.size(); ++i)
    emit("cover_" + std::to_string(i + 1), out.result.covers[i]);
  if (out.original) emit("original", *out.original);
  return out;
}

// ---------------------------------------------------------------------------
// evaluate

/// Mean of report_all(original, SS_i) over the shares.
inline metrics::MetricsReport evaluate_shares(const GrayImage& original, const ShareSet& set) {
  metrics::MetricsAccumulator acc;
  for (const auto& s : set.shares) acc.add(metrics::report_all(original, s));
  return acc.mean();
}

struct EvaluateOptions {
  fs::path original;
  fs::path manifest;
  std::optional<fs::path> share_dir;
  std::optional<fs::path> report_json;
};

inline metrics::MetricsReport cmd_evaluate(const EvaluateOptions& opt) {
  const EnrollmentManifest m = load_manifest(opt.manifest);
  const GrayImage original = load_image(opt.original);
  if (original.dims() != m.dims)
    throw FormatError("original is " + to_string(original.dims()) + " but shares are " +
                      to_string(m.dims));
  const fs::path dir = opt.share_dir ? *opt.share_dir : opt.manifest.parent_path();
  const ShareSet set = load_shares(m, dir.empty() ? fs::path(".") : dir);
  const auto report = evaluate_shares(original, set);

  if (opt.report_json) {
    nlohmann::json j;
    j["schema"] = 1;
    j["user_id"] = m.user_id;
    j["method"] = to_string(m.method);
    j["n"] = m.n;
    j["pairing"] = "each share vs original, averaged over shares";
    j["metrics"] = to_json(report);
    const auto text = j.dump(2) + "\n";
    write_file(*opt.report_json,
               std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  return report;
}

// ---------------------------------------------------------------------------
// batch

struct BatchOptions {
  fs::path root;
  DatasetKind kind = DatasetKind::flat;
  std::vector<MethodKind> methods = {MethodKind::m3};
  std::size_t n = 4;
  std::uint64_t master_seed = 0;
  BitTransformKind bit_transform = Reverse8{};
  // CSV goes to report with extension .csv, the aggregate JSON to .json.
  std::optional<fs::path> report;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::ostream* log = &std::cerr;
};

struct BatchRow {
  std::size_t index = 0;
  std::string file;
  MethodKind method = MethodKind::m3;
  Dimensions dims;
  metrics::MetricsReport report;
};

struct MethodAggregate {
  MethodKind method = MethodKind::m3;
  std::size_t images = 0;
  std::size_t pairs = 0;
  metrics::MetricsReport mean;
  std::optional<double> mean_abs_cr;
};

struct CorpusReport {
  std::string dataset;
  DatasetKind kind = DatasetKind::flat;
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
  BitTransformKind bit_transform = Reverse8{};
  std::size_t images = 0;
  std::size_t skipped = 0;
  std::vector<MethodAggregate> methods;
  std::vector<BatchRow> rows;
};

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string batch_csv(const CorpusReport& r) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.index) + "," + csv_quote(row.file) + "," + to_string(row.method) +
           "," + std::to_string(r.n) + "," + std::to_string(row.dims.width) + "," +
           std::to_string(row.dims.height) + "," + csv_metric_columns(row.report) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const CorpusReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["dataset"] = r.dataset;
  j["dataset_kind"] = to_string(r.kind);
  j["n"] = r.n;
  j["master_seed"] = std::to_string(r.master_seed);
  j["bit_transform"] = to_string(r.bit_transform);
  j["pairing"] = "each share SS_i vs its original image; mean over all (image, share) pairs";
  j["images"] = r.images;
  j["skipped"] = r.skipped;
  auto methods = nlohmann::json::array();
  for (const auto& m : r.methods) {
    nlohmann::json jm;
    jm["method"] = to_string(m.method);
    jm["images"] = m.images;
    jm["pairs"] = m.pairs;
    jm["metrics"] = to_json(m.mean);
    jm["mean_abs_cr"] = m.mean_abs_cr ? nlohmann::json(*m.mean_abs_cr) : nlohmann::json("n/a");
    methods.push_back(std::move(jm));
  }
  j["methods"] = std::move(methods);
  return j;
}

namespace detail {

struct ImageResult {
  bool ok = false;
  Dimensions dims;
  // Per method: every share's report, in share order.
  std::vector<std::vector<metrics::MetricsReport>> per_method;
};

inline ImageResult evaluate_image(const fs::path& path, std::size_t index, const BatchOptions& opt) {
  ImageResult res;
  std::optional<GrayImage> loaded;
  try {
    loaded = load_image(path);
  } catch (const Error&) {
    return res;
  }
  const GrayImage& img = *loaded;
  if (img.size() < 2) return res;

  const std::uint64_t item_seed = derive_item_seed(opt.master_seed, index);
  for (const auto method : opt.methods) {
    const SchemeParams params = params_from_master(method, opt.n, item_seed, opt.bit_transform);
    const Enrollment e = enroll_original(img, params);
    std::vector<metrics::MetricsReport> reports;
    for (const auto& s : e.shares.shares) reports.push_back(metrics::report_all(img, s));
    res.per_method.push_back(std::move(reports));
  }
  res.dims = img.dims();
  res.ok = true;
  return res;
}

}  // namespace detail

/// Enrolls every image of a dataset under each requested method and averages
/// the share-vs-original metrics. Image i uses derive_item_seed(master, i),
/// i being its position in the natural-sorted listing. Output order and
/// content are independent of the thread count.
inline CorpusReport cmd_batch(const BatchOptions& opt) {
  if (opt.n < 2) throw UsageError("--shares must be at least 2, got " + std::to_string(opt.n));
  if (opt.methods.empty()) throw UsageError("no method selected");
  validate(opt.bit_transform);

  const auto files = list_dataset(opt.root, opt.kind);
  std::vector<detail::ImageResult> results(files.size());

  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(files.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();)
      results[i] = detail::evaluate_image(files[i], i, opt);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  CorpusReport report;
  report.dataset = opt.root.filename().empty() ? opt.root.parent_path().filename().string()
                                                : opt.root.filename().string();
  report.kind = opt.kind;
  report.n = opt.n;
  report.master_seed = opt.master_seed;
  report.bit_transform = opt.bit_transform;

  std::vector<metrics::MetricsAccumulator> totals(opt.methods.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& r = results[i];
    if (!r.ok) {
      ++report.skipped;
      continue;
    }
    ++report.images;
    for (std::size_t k = 0; k < opt.methods.size(); ++k) {
      metrics::MetricsAccumulator per_image;
      for (const auto& pair : r.per_method[k]) {
        per_image.add(pair);
        totals[k].add(pair);
      }
      report.rows.push_back({i, fs::relative(files[i], opt.root).generic_string(), opt.methods[k],
                             r.dims, per_image.mean()});
    }
  }
  if (report.skipped > 0 && opt.log)
    *opt.log << "skipped " << report.skipped << " unreadable or undecodable file(s)\n";
  if (report.images == 0)
    throw IoError("empty corpus: no decodable images under '" + opt.root.string() + "'");

  for (std::size_t k = 0; k < opt.methods.size(); ++k)
    report.methods.push_back({opt.methods[k], report.images, totals[k].count(), totals[k].mean(),
                              totals[k].mean_abs_cr()});

  if (opt.report) {
    fs::path csv = *opt.report, json = *opt.report;
    csv.replace_extension(".csv");
    json.replace_extension(".json");
    if (csv.has_parent_path()) ensure_directory(csv.parent_path());
    const auto csv_text = batch_csv(report);
    write_file(csv, std::span(reinterpret_cast<const std::uint8_t*>(csv_text.data()), csv_text.size()));
    const auto json_text = to_json(report).dump(2) + "\n";
    write_file(json, std::span(reinterpret_cast<const std::uint8_t*>(json_text.data()), json_text.size()));
  }
  return report;
}

}  // namespace cbxor
