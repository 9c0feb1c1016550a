#include "hurst/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "fft.hpp"
#include "hurst/errors.hpp"
#include "hurst/rng.hpp"

namespace hurst {

std::string model_name(Model m) {
  switch (m) {
    case Model::NIID: return "niid";
    case Model::ARFIMA: return "arfima";
    case Model::LStable: return "lstable";
    case Model::StudentT: return "studentt";
    case Model::ARRecursive: return "ar";
  }
  return "unknown";
}

Model parse_model(const std::string& name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "niid") return Model::NIID;
  if (s == "arfima") return Model::ARFIMA;
  if (s == "lstable") return Model::LStable;
  if (s == "studentt" || s == "t") return Model::StudentT;
  if (s == "ar" || s == "arrecursive") return Model::ARRecursive;
  throw Error(Errc::BadArgument, "unknown model '" + name + "' (niid|arfima|lstable|studentt|ar)");
}

SimulationSpec SimulationSpec::niid(std::size_t T, std::uint64_t seed) {
  SimulationSpec s;
  s.model = Model::NIID;
  s.length = T;
  s.seed = seed;
  return s;
}

SimulationSpec SimulationSpec::arfima(double d, std::size_t T, std::uint64_t seed) {
  SimulationSpec s = niid(T, seed);
  s.model = Model::ARFIMA;
  s.d = d;
  return s;
}

SimulationSpec SimulationSpec::arfima_for_hurst(double H, std::size_t T, std::uint64_t seed) {
  return arfima(H - 0.5, T, seed);
}

SimulationSpec SimulationSpec::lstable(double alpha, double beta, double mu, double sigma,
                                       std::size_t T, std::uint64_t seed) {
  SimulationSpec s = niid(T, seed);
  s.model = Model::LStable;
  s.alpha = alpha;
  s.beta = beta;
  s.mu = mu;
  s.sigma = sigma;
  return s;
}

SimulationSpec SimulationSpec::lstable_for_hurst(double H, std::size_t T, std::uint64_t seed) {
  return lstable(1.0 / H, 0.0, 0.0, 1.0, T, seed);
}

SimulationSpec SimulationSpec::student_t(int df, std::size_t T, std::uint64_t seed) {
  SimulationSpec s = niid(T, seed);
  s.model = Model::StudentT;
  s.df = df;
  return s;
}

SimulationSpec SimulationSpec::ar_recursive(ARModel model, std::size_t T, std::uint64_t seed) {
  SimulationSpec s = niid(T, seed);
  s.model = Model::ARRecursive;
  s.ar = std::move(model);
  return s;
}

void SimulationSpec::validate() const {
  if (length < 1) throw Error(Errc::TooShort, "simulation length must be >= 1");
  switch (model) {
    case Model::NIID:
      break;
    case Model::ARFIMA:
      if (!(std::fabs(d) < 0.5)) throw Error(Errc::BadD, "ARFIMA needs |d| < 0.5");
      break;
    case Model::LStable:
      if (!(alpha > 0.0 && alpha <= 2.0)) throw Error(Errc::BadAlpha, "alpha must lie in (0, 2]");
      if (!(std::fabs(beta) <= 1.0)) throw Error(Errc::BadBeta, "beta must lie in [-1, 1]");
      if (!(sigma > 0.0)) throw Error(Errc::BadSigma, "sigma must be positive");
      break;
    case Model::StudentT:
      if (df < 1) throw Error(Errc::BadDF, "Student-t needs df >= 1");
      break;
    case Model::ARRecursive:
      if (ar.coefficients.size() != ar.order) {
        throw Error(Errc::BadArgument, "AR model order and coefficient count disagree");
      }
      if (!(ar.residual_sd > 0.0)) throw Error(Errc::BadSigma, "AR residual sd must be positive");
      if (burn_in < 1000) throw Error(Errc::BadArgument, "AR burn-in must be >= 1000");
      if (is_explosive(ar)) throw Error(Errc::ExplosiveModel, "AR polynomial has a unit or explosive root");
      break;
  }
}

MAWeights arfima_weights(double d, std::size_t J) {
  if (!(std::fabs(d) < 0.5)) throw Error(Errc::BadD, "ARFIMA needs |d| < 0.5");
  MAWeights w;
  w.d = d;
  w.values.resize(J + 1);
  w.values[0] = 1.0;
  for (std::size_t j = 1; j <= J; ++j) {
    const double jj = static_cast<double>(j);
    w.values[j] = w.values[j - 1] * (d + jj - 1.0) / jj;
  }
  return w;
}

std::vector<double> ma_filter_direct(std::span<const double> weights, std::span<const double> x) {
  const std::size_t J = weights.size() - 1;
  const std::size_t T = x.size() - J;
  std::vector<double> y(T);
  const auto n = static_cast<std::ptrdiff_t>(T);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    double acc = 0.0;
    const std::size_t base = static_cast<std::size_t>(t) + J;
    for (std::size_t s = 0; s <= J; ++s) acc += weights[s] * x[base - s];
    y[static_cast<std::size_t>(t)] = acc;
  }
  return y;
}

namespace {

std::vector<double> ma_filter_spectral(std::span<const std::complex<double>> weight_spectrum,
                                       std::size_t n, std::size_t J, std::span<const double> x) {
  const std::size_t T = x.size() - J;
  std::vector<double> buf(n, 0.0);
  std::copy(x.begin(), x.end(), buf.begin());
  std::vector<std::complex<double>> spec(n / 2 + 1);
  detail::fft_forward(buf, spec);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= weight_spectrum[k];
  detail::fft_inverse(spec, buf);
  // Circular length n >= T + J: outputs J..J+T-1 never wrap.
  std::vector<double> y(T);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < T; ++t) y[t] = buf[t + J] * scale;
  return y;
}

std::vector<std::complex<double>> weight_spectrum(std::span<const double> weights, std::size_t n) {
  std::vector<double> buf(n, 0.0);
  std::copy(weights.begin(), weights.end(), buf.begin());
  std::vector<std::complex<double>> spec(n / 2 + 1);
  detail::fft_forward(buf, spec);
  return spec;
}

}  // namespace

std::vector<double> ma_filter_fft(std::span<const double> weights, std::span<const double> x) {
  const std::size_t J = weights.size() - 1;
  const std::size_t n = detail::good_fft_size(x.size());
  const auto spec = weight_spectrum(weights, n);
  return ma_filter_spectral(spec, n, J, x);
}

ReturnsSeries gen_arfima(const SimulationSpec& spec) {
  if (!(std::fabs(spec.d) < 0.5)) throw Error(Errc::BadD, "ARFIMA needs |d| < 0.5");
  const std::size_t T = spec.length;
  const std::size_t J = spec.truncation;

  // Draw order: u_1..u_T first, then u_0, u_{-1}, ..., u_{-J}. With d = 0 the
  // output is therefore the NIID series of the same seed.
  RngStream rng(spec.seed);
  std::vector<double> draws(T + J + 1);
  for (double& u : draws) u = rng.normal();
  if (spec.d == 0.0) {
    draws.resize(T);
    return ReturnsSeries(std::move(draws));
  }
  // x[k] = u_{k+1-J}, k = 0..T+J-1 (u_{-J} is drawn but outside the window).
  std::vector<double> x(T + J);
  for (std::size_t k = 0; k < J; ++k) x[k] = draws[T + J - 1 - k];
  for (std::size_t t = 0; t < T; ++t) x[J + t] = draws[t];

  if (spec.convolution == ConvolutionMethod::Direct) {
    const MAWeights w = arfima_weights(spec.d, J);
    return ReturnsSeries(ma_filter_direct(w.values, x));
  }

  // Per-thread cache of the weight spectrum; replications share (d, J, n).
  struct CachedSpectrum {
    double d = std::numeric_limits<double>::quiet_NaN();
    std::size_t J = 0, n = 0;
    std::vector<std::complex<double>> values;
  };
  thread_local CachedSpectrum cached;
  const std::size_t n = detail::good_fft_size(x.size());
  if (cached.d != spec.d || cached.J != J || cached.n != n) {
    const MAWeights w = arfima_weights(spec.d, J);
    cached.values = weight_spectrum(w.values, n);
    cached.d = spec.d;
    cached.J = J;
    cached.n = n;
  }
  return ReturnsSeries(ma_filter_spectral(cached.values, n, J, x));
}

double cms_transform(double alpha, double beta, double mu, double sigma, double V, double W) {
  constexpr double pi = std::numbers::pi;
  if (std::fabs(alpha - 1.0) < 1e-6) {
    const double a = pi / 2.0 + beta * V;
    const double X = (2.0 / pi) * (a * std::tan(V) - beta * std::log(W * std::cos(V) / a));
    return sigma * X + (2.0 / pi) * beta * sigma * std::log(sigma) + mu;
  }
  const double t = std::tan(pi * alpha / 2.0);
  const double B = std::atan(beta * t) / alpha;
  const double S = std::pow(1.0 + beta * beta * t * t, 1.0 / (2.0 * alpha));
  const double X = S * std::sin(alpha * (V + B)) / std::pow(std::cos(V), 1.0 / alpha) *
                   std::pow(std::cos(V - alpha * (V + B)) / W, (1.0 - alpha) / alpha);
  return sigma * X + mu;
}

ReturnsSeries gen_lstable(const SimulationSpec& spec) {
  SimulationSpec checked = spec;
  checked.model = Model::LStable;
  checked.validate();
  RngStream rng(spec.seed);
  std::vector<double> out(spec.length);
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (double& y : out) {
    const double V = (2.0 * rng.uniform() - 1.0) * half_pi;
    const double W = rng.exponential();
    y = cms_transform(spec.alpha, spec.beta, spec.mu, spec.sigma, V, W);
  }
  return ReturnsSeries(std::move(out));
}

ReturnsSeries gen_iid(const SimulationSpec& spec) {
  RngStream rng(spec.seed);
  std::vector<double> out(spec.length);
  if (spec.model == Model::StudentT) {
    if (spec.df < 1) throw Error(Errc::BadDF, "Student-t needs df >= 1");
    const double df = static_cast<double>(spec.df);
    for (double& y : out) {
      const double z = rng.normal();
      double chi2 = 0.0;
      for (int k = 0; k < spec.df; ++k) {
        const double g = rng.normal();
        chi2 += g * g;
      }
      y = z / std::sqrt(chi2 / df);
    }
  } else {
    for (double& y : out) y = rng.normal();
  }
  return ReturnsSeries(std::move(out));
}

bool is_explosive(const ARModel& model) {
  const std::size_t p = model.coefficients.size();
  if (p == 0) return false;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < p; ++i) companion(0, i) = model.coefficients[i];
  for (std::size_t i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd eig = companion.eigenvalues();
  const double radius = eig.cwiseAbs().maxCoeff();
  // Roots of 1 - sum phi_i z^i are the reciprocals of the companion eigenvalues.
  return radius >= 1.0 / (1.0 + 1e-8);
}

ReturnsSeries gen_ar_recursive(const SimulationSpec& spec) {
  SimulationSpec checked = spec;
  checked.model = Model::ARRecursive;
  checked.validate();
  const ARModel& ar = spec.ar;
  const std::size_t p = ar.order;
  const std::size_t total = spec.burn_in + spec.length;
  RngStream rng(spec.seed);
  std::vector<double> z(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    double v = ar.intercept;
    for (std::size_t i = 1; i <= p && i <= t; ++i) v += ar.coefficients[i - 1] * z[t - i];
    z[t] = v + ar.residual_sd * rng.normal();
  }
  return ReturnsSeries(std::vector<double>(z.begin() + static_cast<std::ptrdiff_t>(spec.burn_in), z.end()));
}

ReturnsSeries simulate(const SimulationSpec& spec) {
  switch (spec.model) {
    case Model::NIID:
    case Model::StudentT:
      return gen_iid(spec);
    case Model::ARFIMA:
      return gen_arfima(spec);
    case Model::LStable:
      return gen_lstable(spec);
    case Model::ARRecursive:
      return gen_ar_recursive(spec);
  }
  throw Error(Errc::BadArgument, "unknown model");
}

}  // namespace hurst
