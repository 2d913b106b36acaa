#include "trs/rate.hpp"

#include "trs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace trs {

std::string_view to_string(RateLabel l) {
  switch (l) {
    case RateLabel::Linear: return "Linear";
    case RateLabel::Sublinear: return "Sublinear";
    case RateLabel::Inconclusive: break;
  }
  return "Inconclusive";
}

FitResult fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("fit_line: length mismatch");
  FitResult f;
  const auto m = static_cast<double>(x.size());
  if (x.size() < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return f;
}

RateVerdict classify_rate(std::span<const double> iters, std::span<const double> gaps,
                          double tail_fraction, double floor) {
  if (iters.size() != gaps.size()) throw InputError("classify_rate: length mismatch");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw ConfigError("classify_rate: tail fraction must lie in (0, 1]");
  RateVerdict v;
  v.tail_fraction = tail_fraction;

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < gaps.size(); ++i)
    if (gaps[i] > floor && iters[i] >= 1.0 && std::isfinite(gaps[i])) kept.push_back(i);
  const auto take = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(kept.size())));
  const std::size_t first = kept.size() - take;

  std::vector<double> k, logk, logg;
  for (std::size_t j = first; j < kept.size(); ++j) {
    k.push_back(iters[kept[j]]);
    logk.push_back(std::log(iters[kept[j]]));
    logg.push_back(std::log(gaps[kept[j]]));
  }
  v.samples = k.size();
  if (v.samples < 3) return v;
  v.linear_fit = fit_line(k, logg);
  v.power_fit = fit_line(logk, logg);

  if (v.linear_fit.r2 >= 0.99 && v.linear_fit.slope < 0.0 && v.linear_fit.r2 >= v.power_fit.r2)
    v.label = RateLabel::Linear;
  else if (v.power_fit.r2 >= 0.99 && v.power_fit.slope < 0.0 && v.power_fit.r2 > v.linear_fit.r2)
    v.label = RateLabel::Sublinear;
  return v;
}

}  // namespace trs
