#include "hurst/spectral_tail.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "fft.hpp"
#include "hurst/errors.hpp"
#include "ols.hpp"

namespace hurst {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_ordinates(std::size_t T, std::size_t m) {
  if (m < 1 || T < 3 || m > (T - 1) / 2) {
    throw Error(Errc::BadOrdinateCount, "ordinate count " + std::to_string(m) + " outside [1, " +
                                            std::to_string(T < 3 ? 0 : (T - 1) / 2) + "]");
  }
}

}  // namespace

double Periodogram::frequency(std::size_t j) const {
  return two_pi * static_cast<double>(j) / static_cast<double>(T);
}

Periodogram periodogram(std::span<const double> r, std::size_t m) {
  const std::size_t T = r.size();
  check_ordinates(T, m);
  std::vector<std::complex<double>> spec(T / 2 + 1);
  detail::fft_forward(r, spec);
  Periodogram p;
  p.T = T;
  p.ordinates.resize(m);
  const double norm = 1.0 / (two_pi * static_cast<double>(T));
  for (std::size_t j = 1; j <= m; ++j) p.ordinates[j - 1] = std::norm(spec[j]) * norm;
  return p;
}

Periodogram periodogram_direct(std::span<const double> r, std::size_t m) {
  const std::size_t T = r.size();
  check_ordinates(T, m);
  Periodogram p;
  p.T = T;
  p.ordinates.resize(m);
  const double norm = 1.0 / (two_pi * static_cast<double>(T));
  const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 1; jj <= mm; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    double re = 0.0, im = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
      // (j t) mod T keeps the angle argument small and exact.
      const double angle = two_pi * static_cast<double>((j * t) % T) / static_cast<double>(T);
      re += r[t - 1] * std::cos(angle);
      im -= r[t - 1] * std::sin(angle);
    }
    p.ordinates[j - 1] = (re * re + im * im) * norm;
  }
  return p;
}

std::size_t gph_ordinates(std::size_t T) {
  return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(T)) + 1e-9));
}

std::size_t robinson_ordinates(std::size_t T) {
  const auto m = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(T), 0.9) + 1e-9));
  return std::min(m, (T - 1) / 2);
}

namespace {

DEstimate log_periodogram_regression(std::span<const double> r, DMethod method) {
  const std::size_t T = r.size();
  if (T < 100) throw Error(Errc::TooShort, "log-periodogram estimators need T >= 100");
  const std::size_t m = method == DMethod::GPH ? gph_ordinates(T) : robinson_ordinates(T);
  const Periodogram p = periodogram(r, m);
  std::vector<double> x(m), y(m);
  for (std::size_t j = 1; j <= m; ++j) {
    const double I = p.ordinates[j - 1];
    if (!(I > 0.0)) {
      throw Error(Errc::ZeroOrdinate, "periodogram ordinate " + std::to_string(j) + " is zero");
    }
    const double lambda = p.frequency(j);
    x[j - 1] = method == DMethod::GPH ? -2.0 * std::log(2.0 * std::sin(lambda / 2.0)) : std::log(lambda);
    y[j - 1] = std::log(I);
  }
  const auto fit = detail::fit_line(x, y);
  DEstimate est;
  est.method = method;
  est.m = m;
  est.intercept = fit.intercept;
  if (method == DMethod::GPH) {
    est.d = fit.slope;
    est.standard_error = fit.slope_se;
  } else {
    est.d = -fit.slope / 2.0;
    est.standard_error = fit.slope_se / 2.0;
  }
  return est;
}

}  // namespace

DEstimate estimate_gph(std::span<const double> r) {
  return log_periodogram_regression(r, DMethod::GPH);
}

DEstimate estimate_robinson(std::span<const double> r) {
  return log_periodogram_regression(r, DMethod::Robinson);
}

std::size_t tail_count(std::size_t T) { return T * 5 / 100; }

HurstEstimate estimate_tail(std::span<const double> r, TailMethod method) {
  if (r.size() < 100) throw Error(Errc::TooShort, "tail estimators need T >= 100");
  return estimate_tail(r, method, tail_count(r.size()));
}

HurstEstimate estimate_tail(std::span<const double> r, TailMethod method, std::size_t m) {
  const std::size_t T = r.size();
  if (m < 2 || m > T) throw Error(Errc::BadArgument, "tail count must lie in [2, T]");
  if (method == TailMethod::Pickands && 4 * m > T) {
    throw Error(Errc::TooShort, "Pickands needs 4m <= T");
  }
  const std::size_t need = method == TailMethod::Pickands ? 4 * m : m;
  // Descending by value, ties by ascending index; only the top `need` matter.
  std::vector<std::size_t> idx(T);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(need), idx.end(),
                    [&](std::size_t a, std::size_t b) { return r[a] > r[b] || (r[a] == r[b] && a < b); });
  auto x = [&](std::size_t k) { return r[idx[k - 1]]; };  // x_(k), 1-based

  HurstEstimate est;
  est.n_points = m;
  switch (method) {
    case TailMethod::Pickands: {
      const double upper = x(m) - x(2 * m);
      const double lower = x(2 * m) - x(4 * m);
      if (!(upper > 0.0) || !(lower > 0.0)) {
        throw Error(Errc::NonPositiveTail, "Pickands order-statistic spacing is not positive");
      }
      est.method = "Pickands";
      est.H = (std::log(upper) - std::log(lower)) / std::numbers::ln2;
      break;
    }
    case TailMethod::Hill: {
      if (!(x(m) > 0.0)) throw Error(Errc::NonPositiveTail, "Hill needs x_(m) > 0");
      double s = 0.0;
      for (std::size_t i = 1; i < m; ++i) s += std::log(x(i));
      est.method = "Hill";
      est.H = s / static_cast<double>(m - 1) - std::log(x(m));
      break;
    }
    case TailMethod::HR: {
      if (!(x(m) > 0.0)) throw Error(Errc::NonPositiveTail, "HR needs x_(1), x_(m) > 0");
      est.method = "HR";
      est.H = (std::log(x(1)) - std::log(x(m))) / std::log(static_cast<double>(m));
      break;
    }
  }
  return est;
}

}  // namespace hurst
