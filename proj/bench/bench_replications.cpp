// Serial vs OpenMP replication engine, and direct vs FFT MA convolution.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "hurst/montecarlo.hpp"
#include "hurst/rng.hpp"
#include "hurst/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hurst;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t reps = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200;
  const std::size_t T = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("threads=%d reps=%zu T=%zu\n", threads, reps, T);

  const auto spec = SimulationSpec::arfima(0.08, T);
  std::vector<EstimateSample> a, b;
  const double ts = seconds([&] { a = run_battery_serial(spec, kAllMethods, reps, 1); });
  const double tp = seconds([&] { b = run_battery(spec, kAllMethods, reps, 1, 0); });
  bool same = true;
  for (std::size_t k = 0; k < a.size(); ++k) same = same && a[k].values == b[k].values;
  std::printf("battery  serial %.3fs  openmp %.3fs  speedup %.2fx  identical=%s\n", ts, tp, ts / tp,
              same ? "yes" : "no");

  const auto w = arfima_weights(0.08, 4999);
  RngStream rng(9);
  std::vector<double> x(T + 4999);
  for (auto& v : x) v = rng.normal();
  std::vector<double> yd, yf;
  const double td = seconds([&] { yd = ma_filter_direct(w.values, x); });
  const double tf = seconds([&] {
    for (int i = 0; i < 10; ++i) yf = ma_filter_fft(w.values, x);
  }) / 10.0;
  double maxdiff = 0.0;
  for (std::size_t i = 0; i < yd.size(); ++i) maxdiff = std::max(maxdiff, std::abs(yd[i] - yf[i]));
  std::printf("ma filter direct %.4fs  fft %.5fs  max|diff| %.2e\n", td, tf, maxdiff);
  return same && maxdiff < 1e-9 ? 0 : 1;
}
