#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hurst/timeseries.hpp"

namespace hurst {

enum class Model { NIID, ARFIMA, LStable, StudentT, ARRecursive };

std::string model_name(Model m);
Model parse_model(const std::string& name);

/// How the ARFIMA moving-average filter is applied. `Direct` is the O(J*T)
/// reference; `Fft` is the default and agrees with it to ~1e-12.
enum class ConvolutionMethod { Fft, Direct };

struct SimulationSpec {
  Model model = Model::NIID;
  std::size_t length = 1000;
  std::uint64_t seed = 0;

  double d = 0.0;  // ARFIMA

  double alpha = 2.0;  // L-stable
  double beta = 0.0;
  double mu = 0.0;
  double sigma = 1.0;

  int df = 10;  // Student-t

  ARModel ar;  // ARRecursive

  std::size_t truncation = 4999;  // ARFIMA MA lags J; presample u_{-J}..u_0
  std::size_t burn_in = 1000;     // ARRecursive
  ConvolutionMethod convolution = ConvolutionMethod::Fft;

  static SimulationSpec niid(std::size_t T, std::uint64_t seed = 0);
  static SimulationSpec arfima(double d, std::size_t T, std::uint64_t seed = 0);
  /// d = H - 0.5
  static SimulationSpec arfima_for_hurst(double H, std::size_t T, std::uint64_t seed = 0);
  static SimulationSpec lstable(double alpha, double beta, double mu, double sigma, std::size_t T,
                                std::uint64_t seed = 0);
  /// Symmetric standard stable law with alpha = 1/H.
  static SimulationSpec lstable_for_hurst(double H, std::size_t T, std::uint64_t seed = 0);
  static SimulationSpec student_t(int df, std::size_t T, std::uint64_t seed = 0);
  static SimulationSpec ar_recursive(ARModel model, std::size_t T, std::uint64_t seed = 0);

  /// Throws the model's Bad* error on an invalid parameterisation.
  void validate() const;
};

struct MAWeights {
  double d = 0.0;
  std::vector<double> values;  // gamma_0..gamma_J
};

/// Coefficients of (1 - L)^{-d}: gamma_0 = 1, gamma_j = gamma_{j-1} (d + j - 1) / j.
MAWeights arfima_weights(double d, std::size_t J);

ReturnsSeries gen_arfima(const SimulationSpec& spec);
ReturnsSeries gen_lstable(const SimulationSpec& spec);
ReturnsSeries gen_iid(const SimulationSpec& spec);
ReturnsSeries gen_ar_recursive(const SimulationSpec& spec);

/// Dispatch on spec.model.
ReturnsSeries simulate(const SimulationSpec& spec);

/// Y_t = sum_{s=0..J} w_s x_{t+J-s} for t = 0..T-1, where x has length T + J.
/// The direct form parallelises over t with OpenMP.
std::vector<double> ma_filter_direct(std::span<const double> weights, std::span<const double> x);
std::vector<double> ma_filter_fft(std::span<const double> weights, std::span<const double> x);

/// Single Chambers-Mallows-Stuck draw from the given (V, W) pair.
double cms_transform(double alpha, double beta, double mu, double sigma, double V, double W);

/// True if the AR polynomial has a root on or inside the unit circle.
bool is_explosive(const ARModel& model);

}  // namespace hurst
