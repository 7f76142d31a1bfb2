// cbxor: enroll, authenticate and evaluate XOR-chain cancelable templates.
//
// Exit codes: 0 success, 2 usage, 3 I/O, 4 integrity (digest mismatch or
// missing share), 5 dimension/format.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbxor/commands.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(cbxor::parse_u64(item));
  return out;
}

cbxor::SeedSource seed_source(const std::string& seed, const std::string& seeds) {
  cbxor::SeedSource src;
  if (!seed.empty()) src.master = cbxor::parse_u64(seed);
  if (!seeds.empty()) src.list = parse_seed_list(seeds);
  return src;
}

std::vector<cbxor::MethodKind> parse_methods(const std::string& text) {
  if (text == "all") return {cbxor::MethodKind::m1, cbxor::MethodKind::m2, cbxor::MethodKind::m3};
  std::vector<cbxor::MethodKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(cbxor::parse_method(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cancelable biometric templates from (n,n) XOR-chain secret shares"};
  app.require_subcommand(1);

  std::string method = "m3", bit_transform = "reverse8", seed, seeds, out_dir = ".";
  std::size_t shares = 4;

  // enroll
  cbxor::EnrollOptions enroll_opt;
  std::vector<std::string> covers;
  auto* enroll = app.add_subcommand("enroll", "Split a biometric image into n secret shares");
  enroll->add_option("input", enroll_opt.input, "PGM or BMP biometric image")->required();
  enroll->add_option("--method", method, "m1, m2 or m3")->capture_default_str();
  enroll->add_option("--shares,-n", shares, "Share count n (>= 2)")->capture_default_str();
  enroll->add_option("--seed", seed, "Master seed (decimal u64); omitted = random");
  enroll->add_option("--seeds", seeds, "Comma-separated explicit seeds");
  enroll->add_option("--bit-transform", bit_transform, "reverse8 or rotate:K")->capture_default_str();
  enroll->add_option("--out", out_dir, "Output directory")->capture_default_str();
  enroll->add_option("--user", enroll_opt.user_id, "User id (default: input file stem)");
  enroll->add_option("--cover", covers, "M1 cover image (repeatable)");

  // authenticate
  cbxor::AuthenticateOptions auth_opt;
  std::string share_dir;
  auto* auth = app.add_subcommand("authenticate", "Reconstruct secret and covers from all n shares");
  auth->add_option("manifest", auth_opt.manifest, "Enrollment manifest JSON")->required();
  auth->add_option("--share-dir", share_dir, "Directory holding the shares (default: manifest dir)");
  auth->add_option("--seed", seed, "Master seed used at enrollment, to reveal the M3 original");
  auth->add_option("--seeds", seeds, "Explicit enrollment seeds, to reveal the M3 original");
  auth->add_option("--out", out_dir, "Output directory")->capture_default_str();

  // evaluate
  cbxor::EvaluateOptions eval_opt;
  std::string report;
  auto* evaluate = app.add_subcommand("evaluate", "Distortion metrics of the shares against the original");
  evaluate->add_option("original", eval_opt.original, "Original biometric image")->required();
  evaluate->add_option("manifest", eval_opt.manifest, "Enrollment manifest JSON")->required();
  evaluate->add_option("--share-dir", share_dir, "Directory holding the shares (default: manifest dir)");
  evaluate->add_option("--report", report, "Write the report as JSON");

  // batch
  cbxor::BatchOptions batch_opt;
  std::string dataset_kind = "flat";
  auto* batch = app.add_subcommand("batch", "Enroll and evaluate a whole dataset");
  batch->add_option("root", batch_opt.root, "Dataset root directory")->required();
  batch->add_option("--dataset-kind", dataset_kind, "orl-pgm, iitd-bmp or flat")->capture_default_str();
  batch->add_option("--method", method, "m1, m2, m3, a comma list, or all")->capture_default_str();
  batch->add_option("--shares,-n", shares, "Share count n (>= 2)")->capture_default_str();
  batch->add_option("--seed", seed, "Master seed (decimal u64)")->required();
  batch->add_option("--bit-transform", bit_transform, "reverse8 or rotate:K")->capture_default_str();
  batch->add_option("--report", report, "Report path; writes <path>.csv and <path>.json");
  batch->add_option("--threads", batch_opt.threads, "Worker threads (0 = all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(cbxor::ErrorKind::usage);
  }

  try {
    if (*enroll) {
      enroll_opt.method = cbxor::parse_method(method);
      enroll_opt.n = shares;
      enroll_opt.bit_transform = cbxor::parse_bit_transform(bit_transform);
      enroll_opt.seeds = seed_source(seed, seeds);
      enroll_opt.out_dir = out_dir;
      enroll_opt.covers.assign(covers.begin(), covers.end());
      const auto out = cbxor::cmd_enroll(enroll_opt);
      std::cout << "enrolled " << out.manifest.user_id << ": " << out.manifest.n << " shares ("
                << cbxor::to_string(out.manifest.method) << ", "
                << cbxor::to_string(out.manifest.dims) << ")\nmanifest: "
                << out.manifest_path.string() << "\n";
    } else if (*auth) {
      if (!share_dir.empty()) auth_opt.share_dir = share_dir;
      if (!seed.empty() || !seeds.empty()) auth_opt.reveal = seed_source(seed, seeds);
      auth_opt.out_dir = out_dir;
      const auto out = cbxor::cmd_authenticate(auth_opt);
      std::cout << "digests verified, reconstruction complete (" << out.manifest.n << " shares)\n";
      for (const auto& p : out.written) std::cout << "wrote " << p.string() << "\n";
    } else if (*evaluate) {
      if (!share_dir.empty()) eval_opt.share_dir = share_dir;
      if (!report.empty()) eval_opt.report_json = report;
      const auto r = cbxor::cmd_evaluate(eval_opt);
      cbxor::print_table_header(std::cout);
      cbxor::print_table_row(std::cout, "shares", r);
      std::cout << cbxor::to_json(r).dump() << "\n";
    } else if (*batch) {
      batch_opt.kind = cbxor::parse_dataset_kind(dataset_kind);
      batch_opt.methods = parse_methods(method);
      batch_opt.n = shares;
      batch_opt.master_seed = cbxor::parse_u64(seed);
      batch_opt.bit_transform = cbxor::parse_bit_transform(bit_transform);
      if (!report.empty()) batch_opt.report = report;
      const auto r = cbxor::cmd_batch(batch_opt);
      std::cout << r.dataset << " (" << r.images << " images, n=" << r.n
                << ", each share vs original)\n";
      cbxor::print_table_header(std::cout);
      for (const auto& m : r.methods) cbxor::print_table_row(std::cout, cbxor::to_string(m.method), m.mean);
    }
  } catch (const cbxor::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(cbxor::ErrorKind::io);
  }
  return 0;
}
