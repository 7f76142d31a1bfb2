#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cbxor/metrics.hpp"
#include "test_support.hpp"

using namespace cbxor;
using namespace cbxor::metrics;

namespace {

GrayImage row(std::vector<std::uint8_t> v) {
  const auto w = v.size();
  return GrayImage(w, 1, std::move(v));
}

GrayImage invert(const GrayImage& x) {
  GrayImage out = x;
  for (auto& p : out.pixels()) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

// Two-pass textbook Pearson correlation in long double.
long double naive_correlation(const GrayImage& a, const GrayImage& b) {
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(Correlation, Examples) {
  std::mt19937_64 rng(1);
  const auto x = test::random_image(rng, 32, 32);
  EXPECT_EQ(correlation(x, x), 1.0);
  EXPECT_NEAR(correlation(x, invert(x)), -1.0, 1e-12);
  EXPECT_THROW(correlation(test::constant_image(4, 4, 3), test::random_image(rng, 4, 4)), FormatError);
  EXPECT_THROW(correlation(test::random_image(rng, 4, 4), test::constant_image(4, 4, 0)), FormatError);
}

TEST(Correlation, MatchesTwoPassOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto a = test::random_image(rng, 40, 30);
    auto b = test::random_image(rng, 40, 30);
    for (std::size_t k = 0; k < b.size(); k += 3) b[k] = a[k];  // some dependence
    EXPECT_NEAR(correlation(a, b), static_cast<double>(naive_correlation(a, b)), 1e-12);
  }
}

TEST(MseMae, Examples) {
  std::mt19937_64 rng(3);
  const auto x = test::random_image(rng, 8, 8);
  const auto zero = test::constant_image(8, 8, 0), full = test::constant_image(8, 8, 255);
  EXPECT_EQ(mse(x, x), 0.0);
  EXPECT_EQ(mse(zero, full), 65025.0);
  EXPECT_EQ(mse(row({0, 10}), row({3, 14})), 12.5);
  EXPECT_EQ(rmse(zero, full), 255.0);
  EXPECT_EQ(mae(x, x), 0.0);
  EXPECT_EQ(mae(zero, full), 255.0);
  EXPECT_EQ(mae(row({0, 10}), row({3, 14})), 3.5);
  EXPECT_THROW(mse(GrayImage(2, 2), GrayImage(4, 1)), FormatError);
  EXPECT_THROW(mae(GrayImage(2, 2), GrayImage(4, 1)), FormatError);
}

TEST(Psnr, Examples) {
  std::mt19937_64 rng(4);
  const auto x = test::random_image(rng, 8, 8);
  EXPECT_EQ(psnr(x, x), std::numeric_limits<double>::infinity());
  EXPECT_EQ(psnr(test::constant_image(3, 3, 0), test::constant_image(3, 3, 255)), 0.0);
  // 20*log10(255/sqrt(7971.40)), evaluated independently in Python.
  EXPECT_NEAR(psnr_from_mse(7971.40), 9.115457585584242, 1e-12);
  EXPECT_THROW(psnr(GrayImage(2, 2), GrayImage(4, 1)), FormatError);
}

TEST(Ssim, Examples) {
  std::mt19937_64 rng(5);
  const auto x = test::random_image(rng, 16, 16);
  const auto y = test::random_image(rng, 16, 16);
  EXPECT_EQ(ssim(x, x), 1.0);
  EXPECT_EQ(ssim(x, y), ssim(y, x));
  // C1 / (255^2 + C1): both means differ, both variances and the covariance vanish.
  EXPECT_NEAR(ssim(test::constant_image(4, 4, 0), test::constant_image(4, 4, 255)),
              9.999000099990002e-05, 1e-15);
  EXPECT_THROW(ssim(GrayImage(2, 2), GrayImage(4, 1)), FormatError);
}

TEST(NpcrUaci, Examples) {
  std::mt19937_64 rng(6);
  const auto x = test::random_image(rng, 8, 8);
  const auto zero = test::constant_image(8, 8, 0), full = test::constant_image(8, 8, 255);
  EXPECT_EQ(npcr(x, x), 0.0);
  EXPECT_EQ(npcr(zero, full), 100.0);
  EXPECT_EQ(npcr(GrayImage(2, 2, std::vector<std::uint8_t>{1, 2, 3, 4}),
                 GrayImage(2, 2, std::vector<std::uint8_t>{1, 2, 3, 5})),
            25.0);
  EXPECT_EQ(uaci(x, x), 0.0);
  EXPECT_EQ(uaci(zero, full), 100.0);
  EXPECT_NEAR(uaci_from_mae(59.54), 23.349019607843136, 1e-12);
}

TEST(NpcrUaci, XorWithNonzeroConstantChangesEveryPixel) {
  std::mt19937_64 rng(7);
  const auto x = test::random_image(rng, 20, 20);
  for (unsigned c = 1; c < 256; c += 17) {
    GrayImage y = x;
    for (auto& p : y.pixels()) p ^= static_cast<std::uint8_t>(c);
    EXPECT_EQ(npcr(x, y), 100.0);
  }
}

TEST(ReportAll, IdealRow) {
  std::mt19937_64 rng(8);
  const auto x = test::random_image(rng, 30, 20);
  const auto r = report_all(x, x);
  ASSERT_TRUE(r.cr.has_value());
  EXPECT_EQ(*r.cr, 1.0);
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_EQ(r.rmse, 0.0);
  EXPECT_EQ(r.mae, 0.0);
  EXPECT_TRUE(std::isinf(r.psnr) && r.psnr > 0);
  EXPECT_EQ(r.ssim, 1.0);
  EXPECT_EQ(r.npcr, 0.0);
  EXPECT_EQ(r.uaci, 0.0);
}

TEST(ReportAll, ConstantImageCorrelationIsNotAvailable) {
  const auto r = report_all(test::constant_image(5, 5, 9), test::constant_image(5, 5, 200));
  EXPECT_FALSE(r.cr.has_value());
  EXPECT_EQ(r.npcr, 100.0);
}

TEST(ReportAll, PropertiesOverRandomPairs) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto w = 1 + rng() % 24, h = 2 + rng() % 24;
    const auto a = test::random_image(rng, w, h);
    auto b = test::random_image(rng, w, h);
    if (i % 3 == 0)
      for (std::size_t k = 0; k < b.size(); k += 2) b[k] = a[k];
    const auto r = report_all(a, b);
    const auto s = report_all(b, a);

    EXPECT_NEAR(r.rmse * r.rmse, r.mse, 1e-9 * std::max(1.0, r.mse));
    EXPECT_EQ(r.uaci, 100.0 * r.mae / 255.0);
    EXPECT_GE(r.npcr, 0.0);
    EXPECT_LE(r.npcr, 100.0);
    EXPECT_GE(r.uaci, 0.0);
    EXPECT_LE(r.uaci, 100.0);
    EXPECT_LE(r.mse, 65025.0);
    EXPECT_LE(r.mae, 255.0);
    EXPECT_GE(r.ssim, -1.0);
    EXPECT_LE(r.ssim, 1.0);
    if (r.cr) {
      EXPECT_GE(*r.cr, -1.0);
      EXPECT_LE(*r.cr, 1.0);
      ASSERT_TRUE(s.cr.has_value());
      EXPECT_NEAR(*r.cr, *s.cr, 1e-12);
    }
    // Symmetry of all eight measures.
    EXPECT_EQ(r.mse, s.mse);
    EXPECT_EQ(r.rmse, s.rmse);
    EXPECT_EQ(r.mae, s.mae);
    EXPECT_EQ(r.psnr, s.psnr);
    EXPECT_NEAR(r.ssim, s.ssim, 1e-12);
    EXPECT_EQ(r.npcr, s.npcr);
    EXPECT_EQ(r.uaci, s.uaci);

    // Single-measure entry points agree with the report.
    EXPECT_EQ(r.mse, mse(a, b));
    EXPECT_EQ(r.mae, mae(a, b));
    EXPECT_EQ(r.npcr, npcr(a, b));
    EXPECT_EQ(r.uaci, uaci(a, b));
    EXPECT_EQ(r.ssim, ssim(a, b));
  }
}

TEST(MetricsAccumulator, MeansAndAggregateIdentities) {
  std::mt19937_64 rng(10);
  MetricsAccumulator acc;
  double mse_sum = 0, npcr_sum = 0, abs_cr_sum = 0;
  for (int i = 0; i < 10; ++i) {
    const auto r = report_all(test::random_image(rng, 8, 8), test::random_image(rng, 8, 8));
    acc.add(r);
    mse_sum += r.mse;
    npcr_sum += r.npcr;
    abs_cr_sum += std::fabs(*r.cr);
  }
  acc.add(report_all(test::constant_image(8, 8, 1), test::constant_image(8, 8, 2)));
  const auto m = acc.mean();
  EXPECT_EQ(acc.count(), 11u);
  EXPECT_NEAR(m.mse, (mse_sum + 1.0) / 11, 1e-9);
  EXPECT_NEAR(m.npcr, (npcr_sum + 100.0) / 11, 1e-9);
  EXPECT_EQ(m.uaci, 100.0 * m.mae / 255.0);
  EXPECT_EQ(m.rmse, std::sqrt(m.mse));
  ASSERT_TRUE(acc.mean_abs_cr().has_value());
  EXPECT_NEAR(*acc.mean_abs_cr(), abs_cr_sum / 10, 1e-12);
}
