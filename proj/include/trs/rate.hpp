// Empirical convergence-rate classification from a gap sequence.
#pragma once

#include <span>
#include <string_view>

namespace trs {

enum class RateLabel { Linear, Sublinear, Inconclusive };

std::string_view to_string(RateLabel l);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct RateVerdict {
  RateLabel label = RateLabel::Inconclusive;
  /// log(gap) against k.
  FitResult linear_fit;
  /// log(gap) against log(k); slope is the power-law exponent.
  FitResult power_fit;
  double tail_fraction = 0.5;
  std::size_t samples = 0;
};

/// Least-squares line through (x, y). r2 is 1 for a perfect fit (and for
/// constant y); 0 when fewer than two distinct x.
FitResult fit_line(std::span<const double> x, std::span<const double> y);

/// Keeps the pairs with gap > floor and k >= 1, fits the last tail_fraction
/// of them. Linear needs linear r2 >= 0.99, a negative slope and at least the
/// power fit's r2; Sublinear needs power r2 >= 0.99, a negative exponent and
/// strictly better quality than the linear fit.
RateVerdict classify_rate(std::span<const double> iters, std::span<const double> gaps,
                          double tail_fraction = 0.5, double floor = 1e-14);

}  // namespace trs
