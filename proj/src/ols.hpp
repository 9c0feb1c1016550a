#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace hurst::detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares of y on (1, x), centred two-pass form.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    f.sse += e * e;
  }
  if (n > 2) f.slope_se = std::sqrt(f.sse / static_cast<double>(n - 2) / sxx);
  return f;
}

}  // namespace hurst::detail
