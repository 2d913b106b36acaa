#include "trs/rate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace trs;

namespace {

RateVerdict classify(double (*gap)(double), int count) {
  std::vector<double> k, g;
  for (int i = 0; i <= count; ++i) {
    k.push_back(i);
    g.push_back(gap(i));
  }
  return classify_rate(k, g);
}

}  // namespace

TEST(FitLine, Exact) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const FitResult f = fit_line(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r2, 1.0);
  const std::vector<double> same{2, 2, 2, 2};
  EXPECT_EQ(fit_line(same, y).r2, 0.0);
}

TEST(ClassifyRate, Geometric) {
  const RateVerdict v = classify([](double k) { return std::pow(0.9, k); }, 200);
  EXPECT_EQ(v.label, RateLabel::Linear);
  EXPECT_GE(v.linear_fit.r2, 0.999);
  EXPECT_NEAR(v.linear_fit.slope, std::log(0.9), 1e-12);
}

TEST(ClassifyRate, InverseSquare) {
  const RateVerdict v = classify([](double k) { return 1.0 / (k * k); }, 1000);
  EXPECT_EQ(v.label, RateLabel::Sublinear);
  EXPECT_GE(v.power_fit.r2, 0.999);
  EXPECT_NEAR(v.power_fit.slope, -2.0, 1e-12);
}

TEST(ClassifyRate, FloorAndShortInput) {
  EXPECT_EQ(classify([](double) { return 1e-16; }, 50).label, RateLabel::Inconclusive);
  EXPECT_EQ(classify([](double k) { return std::pow(0.5, k); }, 2).label, RateLabel::Inconclusive);
  // Geometric decay below the floor is dropped, not fitted.
  const RateVerdict v = classify([](double k) { return std::pow(0.5, k); }, 200);
  EXPECT_EQ(v.label, RateLabel::Linear);
  EXPECT_LE(v.samples, 24u);
}

TEST(ClassifyRate, NoiseIsInconclusive) {
  const RateVerdict v = classify([](double k) { return 1.0 + 0.5 * std::sin(k * 1.7); }, 200);
  EXPECT_EQ(v.label, RateLabel::Inconclusive);
}
