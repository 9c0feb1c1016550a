#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurst/estimators.hpp"
#include "hurst/montecarlo.hpp"
#include "hurst/timeseries.hpp"

namespace hurst {

enum class Variant { Unfiltered, Filtered };

std::string variant_name(Variant v);

/// Methods tested on every series, in report column order.
inline constexpr Method kReportMethods[] = {Method::RRA, Method::FA1,      Method::FA2,
                                           Method::FA3, Method::Robinson, Method::Hill};

struct AnalysisConfig {
  std::size_t reps = 1000;
  std::uint64_t seed = 42;
  std::vector<double> levels{0.10, 0.05, 0.01};
  std::size_t max_lag = 10;
  OrderCriterion criterion = OrderCriterion::AIC;
  int workers = 0;
  std::string cache_dir;  // NIID tables are cached here when non-empty
  std::string series_id = "series";

  /// Levels must lie in (0, 1); they are stored descending.
  void validate();
};

/// Cutoff sources recorded in the report.
inline constexpr const char* kSourceRecursive = "ar-recursive";
inline constexpr const char* kSourceNiid = "niid";
/// Unfiltered cells when the AR fit failed.
inline constexpr const char* kSourceNiidFallback = "niid-fallback";

struct TestCell {
  Method method = Method::RRA;
  Variant variant = Variant::Unfiltered;
  std::optional<double> estimate;
  std::string cutoff_source;
  std::vector<double> cutoffs;  // aligned with TestReport::levels
  std::vector<bool> reject;     // estimate > cutoff
  std::string error;

  int stars() const;
};

struct Diagnostics {
  std::optional<double> fa1_original;
  std::optional<double> fa1_reordered;
  std::optional<double> fa1_normalized;
  double niid_fa1_sd = 0.0;  // NIID FA1 sd at the series length
  std::string error;
};

struct TestReport {
  std::string series_id;
  std::size_t T = 0;
  SummaryStats summary;
  std::optional<ARModel> ar;
  OrderCriterion criterion = OrderCriterion::AIC;
  std::string ar_error;
  std::vector<double> levels;
  std::vector<TestCell> cells;  // unfiltered block, then filtered block when ar is set
  Diagnostics diagnostics;

  const TestCell* find(Method method, Variant variant) const;
};

/// Runs the battery on unfiltered returns (AR-recursive cutoffs from the
/// fitted model) and on AR residuals (NIID cutoffs at the residual length).
/// Estimator failures are confined to their cell.
TestReport analyze_returns(const ReturnsSeries& r, AnalysisConfig config);
TestReport analyze_index(const PriceSeries& prices, AnalysisConfig config);

enum class Verdict { LongRangeDependent, LStableSignature, WeakEvidence, ConsistentWithNiid };
enum class Evidence { Strong, Weak, None };

std::string verdict_name(Verdict v);
std::string evidence_name(Evidence e);

struct Classification {
  Verdict verdict = Verdict::ConsistentWithNiid;
  Evidence strength = Evidence::None;
  std::string rationale;
};

/// Decision matrix at the 0.05 level. Throws IncompleteReport when a required
/// cell is missing, failed, or 0.05 was not tabulated.
Classification classify_source(const TestReport& report);

/// Long form: one row per (variant, method).
void write_report_csv(std::ostream& out, const TestReport& report);
/// Wide form: one row per (series, variant), cells like ".619***".
void write_table_csv(std::ostream& out, std::span<const TestReport> reports);
void write_summary_csv(std::ostream& out, std::span<const TestReport> reports);
void write_report_json(std::ostream& out, const TestReport& report, const Classification& c);

/// ".619", "-.012", "1.003"
std::string format_estimate(double v);

}  // namespace hurst
