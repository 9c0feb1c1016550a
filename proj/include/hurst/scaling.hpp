#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hurst/timeseries.hpp"

namespace hurst {

/// Block sizes n on a log grid: ln n = 1.6, 1.75, ... up to
/// 0.15 * floor(ln(0.1 T) / 0.15), rounded half-up and deduplicated.
struct ScaleGrid {
  std::size_t T = 0;
  std::vector<std::size_t> scales;
};

ScaleGrid time_scale_grid(std::size_t T);

enum class QGridKind { FA1, FA2, FA3, Custom };

struct QGrid {
  QGridKind kind = QGridKind::Custom;
  std::vector<double> values;

  static QGrid fa1();  // 0.1, 0.2, ..., 1.0
  static QGrid fa2();  // 0.3, 0.6, ..., 3.0
  static QGrid fa3();  // 0.5, 1.0, ..., 5.0
  static QGrid custom(std::vector<double> qs);
};

struct HurstEstimate {
  double H = 0.0;
  std::string method;
  /// ln c for RRA, mean of a(q) for FA, unused (0) for the tail estimators.
  double intercept = 0.0;
  /// FA only: a(q) per moment order, aligned with the QGrid.
  std::vector<double> intercepts;
  std::size_t n_points = 0;
  double residual_sse = 0.0;
};

/// Mean of R_m / S_m over the forward and (offset T - nM) backward-aligned
/// block sets; when nM = T the second set repeats the first.
double rs_statistic(std::span<const double> r, std::size_t n);

HurstEstimate estimate_rra(std::span<const double> r);
HurstEstimate estimate_rra(std::span<const double> r, const ScaleGrid& grid);

/// S_q(T, n) = 1/2 * sum over both block sets of |p_{mn} - p_{(m-1)n}|^q.
double partition_function(const LogPricePath& p, std::size_t n, double q);

/// Fixed-effects fit ln S_q(T,n) = a(q) + (Hq - 1) ln n over the full (q, n) grid.
HurstEstimate estimate_fa(std::span<const double> r, const QGrid& qs);
HurstEstimate estimate_fa(std::span<const double> r, const QGrid& qs, const ScaleGrid& grid);

}  // namespace hurst
