#include "hurst/timeseries.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "hurst/errors.hpp"
#include "hurst/rng.hpp"

namespace hurst {

PriceSeries::PriceSeries(std::vector<double> values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  if (values_.size() < 2) {
    throw Error(Errc::TooShort, "a price series needs at least 2 observations, got " +
                                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw Error(Errc::NonPositivePrice, "price at row " + std::to_string(i + 1) +
                                              " is not a positive finite number");
    }
  }
  if (!labels_.empty() && labels_.size() != values_.size()) {
    throw Error(Errc::BadArgument, "labels and prices differ in length");
  }
}

ReturnsSeries::ReturnsSeries(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(Errc::NonFinite, "return at index " + std::to_string(i) + " is not finite");
    }
  }
}

LogPricePath::LogPricePath(std::span<const double> returns) : values_(returns.size() + 1) {
  values_[0] = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) values_[t + 1] = values_[t] + returns[t];
}

ReturnsSeries LogPricePath::differences() const {
  std::vector<double> out(values_.size() - 1);
  for (std::size_t t = 0; t + 1 < values_.size(); ++t) out[t] = values_[t + 1] - values_[t];
  return ReturnsSeries(std::move(out));
}

OrderCriterion parse_order_criterion(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "aic") return OrderCriterion::AIC;
  if (lower == "bic") return OrderCriterion::BIC;
  throw Error(Errc::BadArgument, "unknown order-selection criterion '" + name + "' (aic|bic)");
}

ReturnsSeries log_returns(const PriceSeries& prices) {
  auto p = prices.values();
  std::vector<double> out(p.size() - 1);
  for (std::size_t t = 0; t + 1 < p.size(); ++t) out[t] = std::log(p[t + 1]) - std::log(p[t]);
  return ReturnsSeries(std::move(out));
}

SummaryStats summary_stats(std::span<const double> r) {
  const std::size_t n = r.size();
  if (n < 4) throw Error(Errc::TooShort, "summary statistics need at least 4 returns");
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : r) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  // a constant series leaves rounding residue of order eps * |mean|
  const double floor_sd = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(mean);
  if (m2 <= floor_sd * floor_sd) throw Error(Errc::DegenerateSeries, "zero sample variance");
  SummaryStats s;
  s.mean = mean;
  s.sd = std::sqrt(m2);
  s.skewness = m3 / (m2 * s.sd);
  s.kurtosis = m4 / (m2 * m2);
  return s;
}

std::vector<std::size_t> ranks(std::span<const double> r) {
  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
  std::vector<std::size_t> rank(r.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;
  return rank;
}

ReturnsSeries random_reorder(std::span<const double> r, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> xi(r.size());
  for (double& u : xi) u = rng.uniform();
  const auto rank = ranks(xi);
  std::vector<double> out(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) out[t] = r[rank[t] - 1];
  return ReturnsSeries(std::move(out));
}

ReturnsSeries normalize_transform(std::span<const double> r) {
  const auto rank = ranks(r);
  const double denom = static_cast<double>(r.size()) + 1.0;
  std::vector<double> out(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    out[t] = normal_quantile(static_cast<double>(rank[t]) / denom);
  }
  return ReturnsSeries(std::move(out));
}

double autocorrelation(std::span<const double> r, std::size_t lag) {
  const std::size_t n = r.size();
  if (lag >= n) return 0.0;
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double d = r[t] - mean;
    den += d * d;
    if (t >= lag) num += d * (r[t - lag] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

namespace {

struct ArFit {
  Eigen::VectorXd beta;  // intercept, phi_1..phi_p
  double sse = 0.0;
};

ArFit fit_ar_order(std::span<const double> r, std::size_t p, std::size_t max_lag) {
  const std::size_t n = r.size() - max_lag;
  Eigen::MatrixXd X(n, p + 1);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = max_lag + i;
    y(i) = r[t];
    X(i, 0) = 1.0;
    for (std::size_t k = 1; k <= p; ++k) X(i, k) = r[t - k];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p + 1)) {
    throw Error(Errc::SingularDesign, "AR(" + std::to_string(p) + ") design matrix is rank-deficient");
  }
  ArFit fit;
  fit.beta = qr.solve(y);
  fit.sse = (y - X * fit.beta).squaredNorm();
  return fit;
}

}  // namespace

ARModel fit_ar(std::span<const double> r, std::size_t max_lag, OrderCriterion criterion) {
  const std::size_t T = r.size();
  if (T <= 10 * max_lag || T < 2) {
    throw Error(Errc::TooShort, "AR fit with max_lag " + std::to_string(max_lag) +
                                    " needs more than " + std::to_string(10 * max_lag) + " returns");
  }
  const double n = static_cast<double>(T - max_lag);
  double best_score = std::numeric_limits<double>::infinity();
  ARModel best;
  for (std::size_t p = 0; p <= max_lag; ++p) {
    const ArFit fit = fit_ar_order(r, p, max_lag);
    if (p == 0 && fit.sse <= 0.0) throw Error(Errc::DegenerateSeries, "constant returns series");
    const double k = static_cast<double>(p + 1);
    const double penalty = criterion == OrderCriterion::AIC ? 2.0 * k : k * std::log(n);
    const double score = n * std::log(fit.sse / n) + penalty;
    if (score < best_score) {
      best_score = score;
      best.order = p;
      best.intercept = fit.beta(0);
      best.coefficients.assign(fit.beta.data() + 1, fit.beta.data() + 1 + p);
      const double dof = std::max(1.0, n - k);
      best.residual_sd = std::sqrt(fit.sse / dof);
    }
  }
  return best;
}

ReturnsSeries ar_filter(std::span<const double> r, const ARModel& model) {
  const std::size_t p = model.order;
  if (model.coefficients.size() != p) {
    throw Error(Errc::BadArgument, "AR model order and coefficient count disagree");
  }
  if (p >= r.size()) {
    throw Error(Errc::OrderTooLarge, "AR order " + std::to_string(p) + " >= series length");
  }
  std::vector<double> out(r.size() - p);
  for (std::size_t t = p; t < r.size(); ++t) {
    double e = r[t] - model.intercept;
    for (std::size_t i = 1; i <= p; ++i) e -= model.coefficients[i - 1] * r[t - i];
    out[t - p] = e;
  }
  return ReturnsSeries(std::move(out));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
               1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
               0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
               0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
               7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

PriceSeries read_price_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_row(line);
  }
  if (header.empty()) throw Error(Errc::TooShort, "price file is empty");
  std::optional<std::size_t> date_col, close_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = lowercase(header[i]);
    if (name == "date") date_col = i;
    if (name == "close") close_col = i;
  }
  if (!close_col) throw Error(Errc::Parse, "price file header lacks a 'close' column");

  std::vector<double> closes;
  std::vector<std::string> dates;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_row(line);
    if (fields.size() <= *close_col) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": missing close value");
    }
    const auto value = parse_number(fields[*close_col]);
    if (!value) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": close '" + fields[*close_col] +
                                   "' is not numeric");
    }
    if (!(*value > 0.0) || !std::isfinite(*value)) {
      throw Error(Errc::NonPositivePrice, "line " + std::to_string(line_no) + ": close must be positive");
    }
    closes.push_back(*value);
    if (date_col) dates.push_back(fields.size() > *date_col ? fields[*date_col] : std::string{});
  }
  return PriceSeries(std::move(closes), std::move(dates));
}

PriceSeries read_price_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open '" + path + "'");
  return read_price_csv(in);
}

ReturnsSeries read_values_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t column = 0;
  bool first = true;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_row(line);
    if (first) {
      first = false;
      if (!parse_number(fields[0])) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (lowercase(fields[i]) == "value") column = i;
        }
        continue;
      }
    }
    const auto v = fields.size() > column ? parse_number(fields[column]) : std::nullopt;
    if (!v) throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": value is not numeric");
    values.push_back(*v);
  }
  return ReturnsSeries(std::move(values));
}

ReturnsSeries read_values_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open '" + path + "'");
  return read_values_csv(in);
}

void write_values_csv(std::ostream& out, std::span<const double> values) {
  out << "value\n";
  char buf[64];
  for (double v : values) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
    out << '\n';
  }
}

}  // namespace hurst
