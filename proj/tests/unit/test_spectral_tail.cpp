#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "hurst/errors.hpp"
#include "hurst/rng.hpp"
#include "hurst/simulate.hpp"
#include "hurst/spectral_tail.hpp"

using namespace hurst;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected hurst::Error");
  return Errc::Parse;
}

constexpr double pi = std::numbers::pi;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Plain complex sum, no index reduction.
double ordinate_naive(std::span<const double> r, std::size_t j) {
  std::complex<double> s = 0;
  const double T = static_cast<double>(r.size());
  for (std::size_t t = 1; t <= r.size(); ++t) s += r[t - 1] * std::polar(1.0, -2 * pi * j * t / T);
  return std::norm(s) / (2 * pi * T);
}

}  // namespace

TEST_CASE("periodogram FFT matches direct summation") {
  for (std::size_t T : {101, 256, 1000, 1237}) {
    auto r = simulate(SimulationSpec::arfima(0.2, T, T));
    const std::size_t m = (T - 1) / 2;
    auto a = periodogram(r, m);
    auto b = periodogram_direct(r, m);
    for (std::size_t j = 1; j <= m; ++j) {
      CHECK(a.ordinates[j - 1] == doctest::Approx(b.ordinates[j - 1]).epsilon(1e-9).scale(1e-12));
      if (j % 37 == 1) {
        CHECK(b.ordinates[j - 1] == doctest::Approx(ordinate_naive(r, j)).epsilon(1e-8).scale(1e-12));
      }
    }
  }
}

TEST_CASE("periodogram properties") {
  const std::vector<double> c(300, 2.5);
  for (double I : periodogram(c, 149).ordinates) CHECK(std::abs(I) < 1e-20);

  const std::size_t T = 1024, j0 = 37;
  std::vector<double> cosine(T);
  for (std::size_t t = 1; t <= T; ++t) cosine[t - 1] = std::cos(2 * pi * j0 * t / T);
  auto p = periodogram(cosine, 511);
  double other = 0;
  for (std::size_t j = 1; j <= 511; ++j) {
    if (j != j0) other = std::max(other, p.ordinates[j - 1]);
  }
  CHECK(p.ordinates[j0 - 1] >= 100 * other);
  CHECK(p.frequency(j0) == doctest::Approx(2 * pi * j0 / T));

  // Parseval over the full grid j = 0..T-1 for a mean-zero series
  auto r = simulate(SimulationSpec::niid(501, 3));
  std::vector<double> z(r.values().begin(), r.values().end());
  double mean = 0;
  for (double v : z) mean += v;
  mean /= z.size();
  double ss = 0;
  for (auto& v : z) {
    v -= mean;
    ss += v * v;
  }
  auto half = periodogram(z, 250);
  double total = 0;  // j = 0 contributes 0; j and T - j are mirror images
  for (double I : half.ordinates) total += 2 * I;
  CHECK(total == doctest::Approx(ss / (2 * pi)).epsilon(1e-8));

  CHECK(code_of([&] { periodogram(z, 251); }) == Errc::BadOrdinateCount);
  CHECK(code_of([&] { periodogram(z, 0); }) == Errc::BadOrdinateCount);
}

TEST_CASE("ordinate counts") {
  CHECK(gph_ordinates(2000) == 44);
  CHECK(gph_ordinates(10000) == 100);
  CHECK(robinson_ordinates(5000) == static_cast<std::size_t>(std::pow(5000.0, 0.9)));
  CHECK(robinson_ordinates(100) == 49);
  CHECK(-2 * std::log(2 * std::sin(pi / 6)) == doctest::Approx(0.0));
}

TEST_CASE("GPH and Robinson regressions") {
  auto r = simulate(SimulationSpec::arfima(0.1, 3000, 2));
  auto g = estimate_gph(r);
  auto rb = estimate_robinson(r);
  CHECK(g.m == 54);
  CHECK(rb.m == robinson_ordinates(3000));

  std::vector<double> xg, xr, yg, yr;
  for (std::size_t j = 1; j <= rb.m; ++j) {
    const double lam = 2 * pi * j / 3000.0;
    const double I = ordinate_naive(r, j);
    if (j <= g.m) {
      xg.push_back(-2 * std::log(std::abs(1.0 - std::polar(1.0, -lam))));
      yg.push_back(std::log(I));
    }
    xr.push_back(std::log(lam));
    yr.push_back(std::log(I));
  }
  CHECK(g.d == doctest::Approx(slope(xg, yg)).epsilon(1e-8));
  CHECK(rb.d == doctest::Approx(-slope(xr, yr) / 2).epsilon(1e-8));
  CHECK(g.standard_error > 0);

  auto w = simulate(SimulationSpec::niid(5000, 9));
  CHECK(std::abs(estimate_robinson(w).d) < 3 * 0.014);
}

TEST_CASE("log-periodogram invariances and errors") {
  auto r = simulate(SimulationSpec::arfima(0.15, 1000, 7));
  std::vector<double> shifted, scaled;
  for (double v : r.values()) {
    shifted.push_back(v + 3.0);
    scaled.push_back(2.5 * v);
  }
  CHECK(estimate_gph(shifted).d == doctest::Approx(estimate_gph(r).d).epsilon(1e-8));
  CHECK(estimate_robinson(shifted).d == doctest::Approx(estimate_robinson(r).d).epsilon(1e-8));
  CHECK(estimate_gph(scaled).d == doctest::Approx(estimate_gph(r).d).epsilon(1e-10));
  CHECK(estimate_robinson(scaled).d == doctest::Approx(estimate_robinson(r).d).epsilon(1e-10));

  CHECK(code_of([] { estimate_gph(std::vector<double>(99, 1.0)); }) == Errc::TooShort);
  CHECK(code_of([] { estimate_robinson(std::vector<double>(400, 0.0)); }) == Errc::ZeroOrdinate);
}

TEST_CASE("tail estimators against hand formulas") {
  auto r = simulate(SimulationSpec::student_t(4, 2000, 5));
  std::vector<double> x(r.values().begin(), r.values().end());
  std::sort(x.begin(), x.end(), std::greater<>());
  const std::size_t m = 100;
  CHECK(tail_count(2000) == m);

  double s = 0;
  for (std::size_t i = 1; i < m; ++i) s += std::log(x[i - 1]);
  const double hill = s / (m - 1) - std::log(x[m - 1]);
  const double hr = (std::log(x[0]) - std::log(x[m - 1])) / std::log(double(m));
  const double pk = std::log((x[m - 1] - x[2 * m - 1]) / (x[2 * m - 1] - x[4 * m - 1])) / std::log(2.0);

  CHECK(estimate_tail(r, TailMethod::Hill).H == doctest::Approx(hill).epsilon(1e-12));
  CHECK(estimate_tail(r, TailMethod::HR).H == doctest::Approx(hr).epsilon(1e-12));
  CHECK(estimate_tail(r, TailMethod::Pickands).H == doctest::Approx(pk).epsilon(1e-12));
}

TEST_CASE("Hill on an exact Pareto tail") {
  RngStream rng(33);
  std::vector<double> x(5000);
  for (auto& v : x) v = std::pow(rng.uniform(), -0.5);
  CHECK(std::abs(estimate_tail(x, TailMethod::Hill, 250).H - 0.5) < 0.07);
}

TEST_CASE("tail estimator invariances") {
  auto r = simulate(SimulationSpec::lstable(1.7, 0.0, 0.0, 1.0, 3000, 8));
  std::vector<double> scaled, affine;
  for (double v : r.values()) {
    scaled.push_back(4.0 * v);
    affine.push_back(3.0 * v - 1.25);
  }
  CHECK(estimate_tail(scaled, TailMethod::Hill).H == doctest::Approx(estimate_tail(r, TailMethod::Hill).H).epsilon(1e-12));
  CHECK(estimate_tail(scaled, TailMethod::HR).H == doctest::Approx(estimate_tail(r, TailMethod::HR).H).epsilon(1e-12));
  CHECK(estimate_tail(scaled, TailMethod::Pickands).H ==
        doctest::Approx(estimate_tail(r, TailMethod::Pickands).H).epsilon(1e-12));
  CHECK(estimate_tail(affine, TailMethod::Pickands).H ==
        doctest::Approx(estimate_tail(r, TailMethod::Pickands).H).epsilon(1e-10));
}

TEST_CASE("tail estimator errors and ties") {
  std::vector<double> neg(200, -1.0);
  neg[0] = 2.0;
  CHECK(code_of([&] { estimate_tail(neg, TailMethod::Hill); }) == Errc::NonPositiveTail);
  CHECK(code_of([&] { estimate_tail(neg, TailMethod::HR); }) == Errc::NonPositiveTail);
  CHECK(code_of([&] { estimate_tail(neg, TailMethod::Pickands); }) == Errc::NonPositiveTail);
  CHECK(code_of([] { estimate_tail(std::vector<double>(50, 1.0), TailMethod::Hill); }) == Errc::TooShort);
  CHECK(code_of([] { estimate_tail(std::vector<double>(100, 1.0), TailMethod::Pickands, 30); }) ==
        Errc::TooShort);

  std::vector<double> ties(400);
  for (std::size_t i = 0; i < ties.size(); ++i) ties[i] = 1.0 + double(i % 40);
  auto a = estimate_tail(ties, TailMethod::Hill);
  auto b = estimate_tail(ties, TailMethod::Hill);
  CHECK(a.H == b.H);
}
