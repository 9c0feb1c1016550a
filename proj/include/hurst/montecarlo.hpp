#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurst/estimators.hpp"
#include "hurst/simulate.hpp"

namespace hurst {

/// Applied to every simulated series before estimation (the reorder seed is
/// derived from the replication seed).
enum class SeriesTransform { None, Reorder, Normalize };

struct EstimateSample {
  Method method = Method::RRA;
  SimulationSpec spec;  // template; the seed field is unused
  std::size_t reps = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> values;  // replication order, failures removed
  std::size_t failures = 0;
  std::string first_failure;
};

/// Replication i simulates `tmpl` with seed substream_seed(master_seed, i)
/// and runs every method on that one series. Estimator errors are counted
/// per method; the result does not depend on `workers` (0 = OpenMP default).
std::vector<EstimateSample> run_battery(const SimulationSpec& tmpl, std::span<const Method> methods,
                                        std::size_t reps, std::uint64_t master_seed, int workers = 0,
                                        SeriesTransform transform = SeriesTransform::None);

/// Single-threaded reference for run_battery.
std::vector<EstimateSample> run_battery_serial(const SimulationSpec& tmpl,
                                               std::span<const Method> methods, std::size_t reps,
                                               std::uint64_t master_seed,
                                               SeriesTransform transform = SeriesTransform::None);

/// One method; throws AllReplicationsFailed when nothing succeeded.
EstimateSample run_replications(const SimulationSpec& tmpl, Method method, std::size_t reps,
                                std::uint64_t master_seed, int workers = 0);

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;  // divisor count - 1
};

SampleSummary summarize_sample(const EstimateSample& s);
SampleSummary summarize_values(std::span<const double> values);

inline constexpr double kDefaultLevels[] = {0.10, 0.05, 0.01};

struct CriticalValueTable {
  Method method = Method::RRA;
  std::size_t T = 0;
  std::size_t count = 0;
  std::size_t failures = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> levels;   // descending: 0.10, 0.05, 0.01
  std::vector<double> cutoffs;  // aligned with levels, non-decreasing

  /// Throws MissingCutoff if `level` was not tabulated.
  double cutoff(double level) const;
  bool has_level(double level) const;
};

/// Nearest-rank cutoff: the ceil((1 - level) * count)-th smallest value.
CriticalValueTable critical_values(const EstimateSample& s,
                                   std::span<const double> levels = kDefaultLevels);

double nearest_rank_quantile(std::span<const double> sorted_values, double prob);

struct PowerResult {
  Method method = Method::RRA;
  SimulationSpec alternative;
  std::size_t T = 0;
  double level = 0.05;
  double rejection_rate = 0.0;
  std::size_t rejections = 0;
  std::size_t valid = 0;
  std::size_t failures = 0;
};

/// Fraction of `sample` strictly above the table's cutoff at `level`.
PowerResult rejection_rate(const EstimateSample& sample, const CriticalValueTable& table,
                           double level);

PowerResult power_function(const SimulationSpec& alt, Method method, const CriticalValueTable& table,
                           std::size_t reps, std::uint64_t master_seed, double level = 0.05,
                           int workers = 0);

// --- Critical-value cache --------------------------------------------------
//
// One CSV per (method, T, reps, master_seed), schema version 1:
//   schema,method,T,reps,master_seed,count,failures,mean,sd,level,cutoff
// one row per tabulated level, levels descending.

inline constexpr int kCriticalValueSchema = 1;

void write_critical_values(std::ostream& out, const CriticalValueTable& table, std::size_t reps,
                           std::uint64_t master_seed);
CriticalValueTable read_critical_values(std::istream& in);

std::string critical_value_filename(Method method, std::size_t T, std::size_t reps,
                                    std::uint64_t master_seed);

class CriticalValueCache {
 public:
  explicit CriticalValueCache(std::filesystem::path dir);

  std::optional<CriticalValueTable> load(Method method, std::size_t T, std::size_t reps,
                                         std::uint64_t master_seed) const;
  void store(const CriticalValueTable& table, std::size_t reps, std::uint64_t master_seed) const;

  /// NIID null tables for every method in `methods`, simulated once for the
  /// missing ones and written back.
  std::vector<CriticalValueTable> niid_tables(std::span<const Method> methods, std::size_t T,
                                              std::size_t reps, std::uint64_t master_seed,
                                              std::span<const double> levels = kDefaultLevels,
                                              int workers = 0) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace hurst
