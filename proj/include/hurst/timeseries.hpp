#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hurst {

/// Closing prices, optionally labelled by date. All values strictly positive.
class PriceSeries {
 public:
  explicit PriceSeries(std::vector<double> values, std::vector<std::string> labels = {});

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

/// Natural-log returns. Only finiteness is enforced here; estimators check
/// their own length requirements.
class ReturnsSeries {
 public:
  ReturnsSeries() = default;
  explicit ReturnsSeries(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  operator std::span<const double>() const noexcept { return values_; }

  std::vector<double> release() && noexcept { return std::move(values_); }

 private:
  std::vector<double> values_;
};

/// p_0 = 0, p_t = p_{t-1} + z_t.
class LogPricePath {
 public:
  explicit LogPricePath(std::span<const double> returns);

  std::span<const double> values() const noexcept { return values_; }
  /// Number of returns T (the path holds T + 1 points).
  std::size_t returns_count() const noexcept { return values_.size() - 1; }
  double operator[](std::size_t t) const noexcept { return values_[t]; }

  ReturnsSeries differences() const;

 private:
  std::vector<double> values_;
};

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;        // divisor T
  double skewness = 0.0;
  double kurtosis = 0.0;  // raw, Gaussian = 3
};

struct ARModel {
  std::size_t order = 0;
  double intercept = 0.0;
  std::vector<double> coefficients;
  double residual_sd = 1.0;
};

enum class OrderCriterion { AIC, BIC };

OrderCriterion parse_order_criterion(const std::string& name);

ReturnsSeries log_returns(const PriceSeries& prices);

SummaryStats summary_stats(std::span<const double> r);

/// Footnote-style reorder: draw T uniforms, output[t] = r[rank(xi_t)].
ReturnsSeries random_reorder(std::span<const double> r, std::uint64_t seed);

/// output[t] = Phi^{-1}(rank(r[t]) / (T + 1)); ties broken by index.
ReturnsSeries normalize_transform(std::span<const double> r);

ARModel fit_ar(std::span<const double> r, std::size_t max_lag,
               OrderCriterion criterion = OrderCriterion::AIC);

/// Residuals e_t = z_t - c - sum phi_i z_{t-i} for t = p+1..T.
ReturnsSeries ar_filter(std::span<const double> r, const ARModel& model);

/// Sample autocorrelation at `lag` (divisor T, mean removed).
double autocorrelation(std::span<const double> r, std::size_t lag);

/// Ascending 1-based ranks; equal values ranked by original index.
std::vector<std::size_t> ranks(std::span<const double> r);

/// Standard normal quantile (Wichura AS241).
double normal_quantile(double p);

/// CSV with header `date,close`.
PriceSeries read_price_csv(std::istream& in);
PriceSeries read_price_csv_file(const std::string& path);

/// CSV with a single numeric column (header optional, first column used).
ReturnsSeries read_values_csv(std::istream& in);
ReturnsSeries read_values_csv_file(const std::string& path);

void write_values_csv(std::ostream& out, std::span<const double> values);

}  // namespace hurst
