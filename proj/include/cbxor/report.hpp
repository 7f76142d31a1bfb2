#pragma once

// Serialization of metrics reports.
//
// JSON: {"cr": <number>|"n/a", "mse": .., "rmse": .., "mae": ..,
//        "psnr": <number>|"inf", "ssim": .., "npcr": .., "uaci": ..}
//
// Batch CSV header (one row per image and method, metrics averaged over the
// n shares of that image):
//   index,file,method,n,width,height,cr,mse,rmse,mae,psnr,ssim,npcr,uaci

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "cbxor/error.hpp"
#include "cbxor/metrics.hpp"

namespace cbxor {

inline constexpr const char* kCsvHeader =
    "index,file,method,n,width,height,cr,mse,rmse,mae,psnr,ssim,npcr,uaci";

inline std::string format_fixed(double v, int precision = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline nlohmann::json to_json(const metrics::MetricsReport& r) {
  nlohmann::json j;
  j["cr"] = r.cr ? nlohmann::json(*r.cr) : nlohmann::json("n/a");
  j["mse"] = r.mse;
  j["rmse"] = r.rmse;
  j["mae"] = r.mae;
  j["psnr"] = std::isinf(r.psnr) ? nlohmann::json("inf") : nlohmann::json(r.psnr);
  j["ssim"] = r.ssim;
  j["npcr"] = r.npcr;
  j["uaci"] = r.uaci;
  return j;
}

inline metrics::MetricsReport metrics_from_json(const nlohmann::json& j) {
  try {
    metrics::MetricsReport r;
    const auto& cr = j.at("cr");
    if (cr.is_string()) {
      if (cr.get<std::string>() != "n/a") throw FormatError("report: bad cr value");
    } else {
      r.cr = cr.get<double>();
    }
    r.mse = j.at("mse").get<double>();
    r.rmse = j.at("rmse").get<double>();
    r.mae = j.at("mae").get<double>();
    const auto& psnr = j.at("psnr");
    if (psnr.is_string()) {
      if (psnr.get<std::string>() != "inf") throw FormatError("report: bad psnr value");
      r.psnr = std::numeric_limits<double>::infinity();
    } else {
      r.psnr = psnr.get<double>();
    }
    r.ssim = j.at("ssim").get<double>();
    r.npcr = j.at("npcr").get<double>();
    r.uaci = j.at("uaci").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

/// Comma-separated metric columns in CSV header order (cr through uaci).
inline std::string csv_metric_columns(const metrics::MetricsReport& r) {
  std::string out = r.cr ? format_fixed(*r.cr) : "n/a";
  for (double v : {r.mse, r.rmse, r.mae, r.psnr, r.ssim, r.npcr, r.uaci}) {
    out += ',';
    out += format_fixed(v);
  }
  return out;
}

inline void print_table_header(std::ostream& os) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %9s %11s %9s %9s %9s %9s %8s %8s\n", "", "Cr", "MSE",
                "RMSE", "MAE", "PSNR", "SSIM", "NPCR", "UACI");
  os << buf;
}

inline void print_table_row(std::ostream& os, const std::string& label,
                            const metrics::MetricsReport& r) {
  const std::string cr = r.cr ? format_fixed(*r.cr, 4) : "n/a";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-10s %9s %11.2f %9.2f %9.2f %9s %9.4f %8.2f %8.2f\n",
                label.c_str(), cr.c_str(), r.mse, r.rmse, r.mae, format_fixed(r.psnr, 3).c_str(),
                r.ssim, r.npcr, r.uaci);
  os << buf;
}

}  // namespace cbxor
