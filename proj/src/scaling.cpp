#include "hurst/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "hurst/errors.hpp"
#include "ols.hpp"

namespace hurst {

ScaleGrid time_scale_grid(std::size_t T) {
  constexpr double step = 0.15;
  constexpr double ln_min = 1.6;
  ScaleGrid grid;
  grid.T = T;
  if (T >= 10) {
    const double ln_max = step * std::floor(std::log(0.1 * static_cast<double>(T)) / step);
    const double n_cap = 0.1 * static_cast<double>(T);
    for (int k = 0;; ++k) {
      const double x = ln_min + step * k;
      if (x > ln_max + 1e-9) break;
      const auto n = static_cast<std::size_t>(std::floor(std::exp(x) + 0.5));
      if (static_cast<double>(n) > n_cap) break;
      if (grid.scales.empty() || grid.scales.back() != n) grid.scales.push_back(n);
    }
  }
  if (grid.scales.size() < 3) {
    throw Error(Errc::TooShort, "T = " + std::to_string(T) +
                                    " gives fewer than 3 time scales");
  }
  return grid;
}

QGrid QGrid::fa1() {
  QGrid g = custom({});
  g.kind = QGridKind::FA1;
  for (int k = 1; k <= 10; ++k) g.values.push_back(0.1 * k);
  return g;
}

QGrid QGrid::fa2() {
  QGrid g = custom({});
  g.kind = QGridKind::FA2;
  for (int k = 1; k <= 10; ++k) g.values.push_back(0.3 * k);
  return g;
}

QGrid QGrid::fa3() {
  QGrid g = custom({});
  g.kind = QGridKind::FA3;
  for (int k = 1; k <= 10; ++k) g.values.push_back(0.5 * k);
  return g;
}

QGrid QGrid::custom(std::vector<double> qs) {
  for (double q : qs) {
    if (!(q > 0.0)) throw Error(Errc::BadArgument, "moment orders q must be positive");
  }
  QGrid g;
  g.kind = QGridKind::Custom;
  g.values = std::move(qs);
  std::sort(g.values.begin(), g.values.end());
  return g;
}

namespace {

std::string grid_name(const QGrid& qs) {
  switch (qs.kind) {
    case QGridKind::FA1: return "FA1";
    case QGridKind::FA2: return "FA2";
    case QGridKind::FA3: return "FA3";
    case QGridKind::Custom: return "FA";
  }
  return "FA";
}

void check_scale(std::size_t T, std::size_t n) {
  if (n < 2 || n > T) {
    throw Error(Errc::BadArgument, "time scale " + std::to_string(n) + " outside [2, " +
                                       std::to_string(T) + "]");
  }
}

/// Sum of R_m / S_m over the M blocks starting at `offset`.
double rs_block_sum(std::span<const double> r, std::size_t n, std::size_t M, std::size_t offset) {
  double total = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < M; ++m) {
    const auto block = r.subspan(offset + m * n, n);
    double mean = 0.0, peak = 0.0;
    for (double z : block) {
      mean += z;
      peak = std::max(peak, std::fabs(z));
    }
    mean *= inv_n;
    double ss = 0.0;
    for (double z : block) ss += (z - mean) * (z - mean);
    const double S = std::sqrt(ss * inv_n);
    if (!(S > 1e-13 * peak)) {
      throw Error(Errc::ZeroDispersion, "block of length " + std::to_string(n) + " has zero dispersion");
    }
    // x_{mn} = 0 seeds the running max/min.
    double x = 0.0, hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      x += block[i] - mean;
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    total += (hi - lo) / S;
  }
  return total;
}

}  // namespace

double rs_statistic(std::span<const double> r, std::size_t n) {
  const std::size_t T = r.size();
  check_scale(T, n);
  const std::size_t M = T / n;
  const std::size_t L = T - n * M;
  const double first = rs_block_sum(r, n, M, 0);
  const double second = L > 0 ? rs_block_sum(r, n, M, L) : first;
  return (first + second) / (2.0 * static_cast<double>(M));
}

HurstEstimate estimate_rra(std::span<const double> r) {
  return estimate_rra(r, time_scale_grid(r.size()));
}

HurstEstimate estimate_rra(std::span<const double> r, const ScaleGrid& grid) {
  std::vector<double> x, y;
  x.reserve(grid.scales.size());
  y.reserve(grid.scales.size());
  for (std::size_t n : grid.scales) {
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(rs_statistic(r, n)));
  }
  const auto fit = detail::fit_line(x, y);
  HurstEstimate est;
  est.H = fit.slope;
  est.method = "RRA";
  est.intercept = fit.intercept;
  est.n_points = x.size();
  est.residual_sse = fit.sse;
  return est;
}

namespace {

/// |p_{mn} - p_{(m-1)n}| over the forward set then the offset-L set
/// (repeated when nM = T), 2M values in total.
std::vector<double> block_increments(std::span<const double> path, std::size_t n) {
  const std::size_t T = path.size() - 1;
  const std::size_t M = T / n;
  const std::size_t L = T - n * M;
  std::vector<double> v;
  v.reserve(2 * M);
  for (std::size_t m = 1; m <= M; ++m) v.push_back(std::fabs(path[m * n] - path[(m - 1) * n]));
  for (std::size_t m = 1; m <= M; ++m) {
    v.push_back(std::fabs(path[L + m * n] - path[L + (m - 1) * n]));
  }
  return v;
}

}  // namespace

double partition_function(const LogPricePath& p, std::size_t n, double q) {
  check_scale(p.returns_count(), n);
  if (!(q > 0.0)) throw Error(Errc::BadArgument, "moment order q must be positive");
  const auto v = block_increments(p.values(), n);
  double total = 0.0;
  bool any = false;
  for (double x : v) {
    if (x > 0.0) any = true;
    total += std::pow(x, q);
  }
  if (!any) throw Error(Errc::AllZeroIncrements, "every block increment at scale " + std::to_string(n) + " is zero");
  return 0.5 * total;
}

HurstEstimate estimate_fa(std::span<const double> r, const QGrid& qs) {
  return estimate_fa(r, qs, time_scale_grid(r.size()));
}

HurstEstimate estimate_fa(std::span<const double> r, const QGrid& qs, const ScaleGrid& grid) {
  if (qs.values.empty()) throw Error(Errc::BadArgument, "empty moment grid");
  const LogPricePath path(r);
  const std::size_t nq = qs.values.size();
  const std::size_t ns = grid.scales.size();

  std::vector<double> ln_n(ns);
  // y[qi * ns + si] = ln S_q(T, n) + ln n
  std::vector<double> y(nq * ns);
  std::vector<double> ln_v;
  for (std::size_t si = 0; si < ns; ++si) {
    const std::size_t n = grid.scales[si];
    check_scale(r.size(), n);
    ln_n[si] = std::log(static_cast<double>(n));
    const auto v = block_increments(path.values(), n);
    ln_v.clear();
    for (double x : v) {
      if (x > 0.0) ln_v.push_back(std::log(x));
    }
    if (ln_v.empty()) {
      throw Error(Errc::ZeroPartition, "partition function is zero at scale " + std::to_string(n));
    }
    for (std::size_t qi = 0; qi < nq; ++qi) {
      const double q = qs.values[qi];
      double s = 0.0;
      for (double lv : ln_v) s += std::exp(q * lv);
      const double S = 0.5 * s;
      if (!(S > 0.0)) {
        throw Error(Errc::ZeroPartition, "partition function underflows at scale " + std::to_string(n));
      }
      y[qi * ns + si] = std::log(S) + ln_n[si];
    }
  }

  double mean_ln_n = 0.0;
  for (double l : ln_n) mean_ln_n += l;
  mean_ln_n /= static_cast<double>(ns);
  double sxx_n = 0.0;
  for (double l : ln_n) sxx_n += (l - mean_ln_n) * (l - mean_ln_n);

  // Within-q demeaning: regressor q (ln n - mean ln n), response y - mean_q(y).
  std::vector<double> y_mean(nq, 0.0);
  double num = 0.0, den = 0.0;
  for (std::size_t qi = 0; qi < nq; ++qi) {
    const double q = qs.values[qi];
    for (std::size_t si = 0; si < ns; ++si) y_mean[qi] += y[qi * ns + si];
    y_mean[qi] /= static_cast<double>(ns);
    double sxy = 0.0;
    for (std::size_t si = 0; si < ns; ++si) sxy += (ln_n[si] - mean_ln_n) * (y[qi * ns + si] - y_mean[qi]);
    num += q * sxy;
    den += q * q * sxx_n;
  }
  HurstEstimate est;
  est.H = num / den;
  est.method = grid_name(qs);
  est.n_points = nq * ns;
  est.intercepts.resize(nq);
  for (std::size_t qi = 0; qi < nq; ++qi) {
    const double q = qs.values[qi];
    est.intercepts[qi] = y_mean[qi] - est.H * q * mean_ln_n;
    for (std::size_t si = 0; si < ns; ++si) {
      const double e = y[qi * ns + si] - est.intercepts[qi] - est.H * q * ln_n[si];
      est.residual_sse += e * e;
    }
    est.intercept += est.intercepts[qi];
  }
  est.intercept /= static_cast<double>(nq);
  return est;
}

}  // namespace hurst
