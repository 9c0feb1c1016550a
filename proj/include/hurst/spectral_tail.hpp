#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hurst/scaling.hpp"

namespace hurst {

/// I(lambda_j) = |sum_t x_t exp(-i lambda_j t)|^2 / (2 pi T), lambda_j = 2 pi j / T.
struct Periodogram {
  std::size_t T = 0;
  std::vector<double> ordinates;  // j = 1..m

  double frequency(std::size_t j) const;  // 1-based j
};

Periodogram periodogram(std::span<const double> r, std::size_t m);

/// Same ordinates by direct summation; OpenMP-parallel over j. Reference for tests.
Periodogram periodogram_direct(std::span<const double> r, std::size_t m);

enum class DMethod { GPH, Robinson };

struct DEstimate {
  double d = 0.0;
  DMethod method = DMethod::GPH;
  std::size_t m = 0;
  double standard_error = 0.0;
  double intercept = 0.0;
};

std::size_t gph_ordinates(std::size_t T);       // floor(T^0.5)
std::size_t robinson_ordinates(std::size_t T);  // floor(T^0.9), capped at floor((T-1)/2)

/// Log-periodogram regression on -2 ln(2 sin(lambda/2)) over floor(sqrt T) ordinates.
DEstimate estimate_gph(std::span<const double> r);

/// Log-periodogram regression on ln(lambda) over T^0.9 ordinates; d = -slope / 2.
DEstimate estimate_robinson(std::span<const double> r);

enum class TailMethod { Pickands, Hill, HR };

std::size_t tail_count(std::size_t T);  // floor(0.05 T)

/// Upper-tail estimators of H = 1/alpha on the raw (signed) returns, with
/// m = floor(0.05 T) order statistics.
HurstEstimate estimate_tail(std::span<const double> r, TailMethod method);
HurstEstimate estimate_tail(std::span<const double> r, TailMethod method, std::size_t m);

}  // namespace hurst
