#pragma once

// Full-reference distortion measures between two equally sized gray images:
// correlation, MSE/RMSE, MAE, PSNR, global SSIM, NPCR and UACI.
//
// Pixel sums are accumulated in 64-bit integers, so every measure is a
// deterministic function of the inputs regardless of evaluation order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "cbxor/error.hpp"
#include "cbxor/image.hpp"

namespace cbxor::metrics {

inline constexpr double kMaxGray = 255.0;
inline constexpr double kSsimC1 = (0.01 * kMaxGray) * (0.01 * kMaxGray);
inline constexpr double kSsimC2 = (0.03 * kMaxGray) * (0.03 * kMaxGray);

namespace detail {

struct PairSums {
  double count = 0;
  std::uint64_t sum_a = 0, sum_b = 0;
  std::uint64_t sum_aa = 0, sum_bb = 0, sum_ab = 0;
  std::uint64_t sum_abs_diff = 0, sum_sq_diff = 0;
  std::uint64_t changed = 0;
};

inline PairSums accumulate(const GrayImage& a, const GrayImage& b) {
  require_same_dims(a, b);
  PairSums s;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  s.count = static_cast<double>(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const std::uint64_t x = pa[i], y = pb[i];
    s.sum_a += x;
    s.sum_b += y;
    s.sum_aa += x * x;
    s.sum_bb += y * y;
    s.sum_ab += x * y;
    const std::uint64_t d = x > y ? x - y : y - x;
    s.sum_abs_diff += d;
    s.sum_sq_diff += d * d;
    s.changed += d != 0;
  }
  return s;
}

// Centered second moments, scaled by the pixel count.
inline double centered(std::uint64_t sum_xy, std::uint64_t sum_x, std::uint64_t sum_y, double n) {
  return static_cast<double>(sum_xy) - static_cast<double>(sum_x) * static_cast<double>(sum_y) / n;
}

inline std::optional<double> correlation(const PairSums& s) {
  const double sab = centered(s.sum_ab, s.sum_a, s.sum_b, s.count);
  const double saa = centered(s.sum_aa, s.sum_a, s.sum_a, s.count);
  const double sbb = centered(s.sum_bb, s.sum_b, s.sum_b, s.count);
  if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

inline double ssim(const PairSums& s) {
  const double mu_a = static_cast<double>(s.sum_a) / s.count;
  const double mu_b = static_cast<double>(s.sum_b) / s.count;
  const double var_a = static_cast<double>(s.sum_aa) / s.count - mu_a * mu_a;
  const double var_b = static_cast<double>(s.sum_bb) / s.count - mu_b * mu_b;
  const double cov = static_cast<double>(s.sum_ab) / s.count - mu_a * mu_b;
  return ((2 * mu_a * mu_b + kSsimC1) * (2 * cov + kSsimC2)) /
         ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
}

}  // namespace detail

/// 20*log10(255/sqrt(mse)); +infinity at mse == 0.
inline double psnr_from_mse(double mse) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(kMaxGray / std::sqrt(mse));
}

/// 100*mae/255.
inline double uaci_from_mae(double mae) { return 100.0 * mae / kMaxGray; }

/// Pearson correlation. Throws FormatError when either image is constant.
inline double correlation(const GrayImage& a, const GrayImage& b) {
  const auto r = detail::correlation(detail::accumulate(a, b));
  if (!r) throw FormatError("correlation undefined: an image has zero variance");
  return *r;
}

inline double mse(const GrayImage& a, const GrayImage& b) {
  const auto s = detail::accumulate(a, b);
  return static_cast<double>(s.sum_sq_diff) / s.count;
}

inline double rmse(const GrayImage& a, const GrayImage& b) { return std::sqrt(mse(a, b)); }

inline double mae(const GrayImage& a, const GrayImage& b) {
  const auto s = detail::accumulate(a, b);
  return static_cast<double>(s.sum_abs_diff) / s.count;
}

/// 20*log10(255/RMSE); +infinity for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b) { return psnr_from_mse(mse(a, b)); }

/// Single-window SSIM over whole-image statistics (population variances).
inline double ssim(const GrayImage& a, const GrayImage& b) { return detail::ssim(detail::accumulate(a, b)); }

/// Percentage of pixel positions that differ.
inline double npcr(const GrayImage& a, const GrayImage& b) {
  const auto s = detail::accumulate(a, b);
  return 100.0 * static_cast<double>(s.changed) / s.count;
}

/// Mean absolute difference as a percentage of 255.
inline double uaci(const GrayImage& a, const GrayImage& b) {
  const auto s = detail::accumulate(a, b);
  return 100.0 * (static_cast<double>(s.sum_abs_diff) / s.count) / kMaxGray;
}

struct MetricsReport {
  std::optional<double> cr;  // empty when an input is constant
  double mse = 0;
  double rmse = 0;
  double mae = 0;
  double psnr = 0;  // +infinity when mse == 0
  double ssim = 0;
  double npcr = 0;
  double uaci = 0;
};

inline MetricsReport report_all(const GrayImage& a, const GrayImage& b) {
  const auto s = detail::accumulate(a, b);
  MetricsReport r;
  r.cr = detail::correlation(s);
  r.mse = static_cast<double>(s.sum_sq_diff) / s.count;
  r.rmse = std::sqrt(r.mse);
  r.mae = static_cast<double>(s.sum_abs_diff) / s.count;
  r.psnr = psnr_from_mse(r.mse);
  r.ssim = detail::ssim(s);
  r.npcr = 100.0 * static_cast<double>(s.changed) / s.count;
  r.uaci = uaci_from_mae(r.mae);
  return r;
}

/// Running arithmetic mean of reports. Correlation is averaged over the
/// reports where it is defined; PSNR, SSIM, NPCR and MSE/MAE are plain means
/// of the per-pair values. RMSE and UACI are derived from the mean MSE and MAE
/// so the identities rmse == sqrt(mse) and uaci == 100*mae/255 also hold on
/// the aggregate. Adding in a fixed order gives bit-identical results.
class MetricsAccumulator {
 public:
  void add(const MetricsReport& r) {
    ++count_;
    if (r.cr) {
      cr_sum_ += *r.cr;
      abs_cr_sum_ += std::fabs(*r.cr);
      ++cr_count_;
    }
    mse_ += r.mse;
    mae_ += r.mae;
    psnr_ += r.psnr;
    ssim_ += r.ssim;
    npcr_ += r.npcr;
  }

  std::size_t count() const noexcept { return count_; }

  /// Mean |cr| over reports with a defined correlation.
  std::optional<double> mean_abs_cr() const {
    if (cr_count_ == 0) return std::nullopt;
    return abs_cr_sum_ / static_cast<double>(cr_count_);
  }

  MetricsReport mean() const {
    MetricsReport r;
    if (count_ == 0) return r;
    const double n = static_cast<double>(count_);
    if (cr_count_ > 0) r.cr = cr_sum_ / static_cast<double>(cr_count_);
    r.mse = mse_ / n;
    r.rmse = std::sqrt(r.mse);
    r.mae = mae_ / n;
    r.psnr = psnr_ / n;
    r.ssim = ssim_ / n;
    r.npcr = npcr_ / n;
    r.uaci = uaci_from_mae(r.mae);
    return r;
  }

 private:
  std::size_t count_ = 0;
  std::size_t cr_count_ = 0;
  double cr_sum_ = 0, abs_cr_sum_ = 0;
  double mse_ = 0, mae_ = 0, psnr_ = 0, ssim_ = 0, npcr_ = 0;
};

}  // namespace cbxor::metrics
