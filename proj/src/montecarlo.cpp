#include "hurst/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hurst/errors.hpp"
#include "hurst/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hurst {

namespace {

int resolve_workers(int workers) {
#ifdef _OPENMP
  return workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
  return 1;
#endif
}

struct Cell {
  double value = 0.0;
  bool ok = false;
  std::string error;
};

/// Everything replication `i` produces: one cell per method.
void run_one(const SimulationSpec& tmpl, std::span<const Method> methods, std::uint64_t master_seed,
             std::size_t i, SeriesTransform transform, std::span<Cell> out) {
  SimulationSpec spec = tmpl;
  spec.seed = substream_seed(master_seed, i);
  ReturnsSeries series = simulate(spec);
  if (transform == SeriesTransform::Reorder) {
    series = random_reorder(series, mix64(spec.seed ^ 0x5bd1e995ULL));
  } else if (transform == SeriesTransform::Normalize) {
    series = normalize_transform(series);
  }
  for (std::size_t k = 0; k < methods.size(); ++k) {
    try {
      out[k].value = estimate(methods[k], series).value;
      out[k].ok = std::isfinite(out[k].value);
      if (!out[k].ok) out[k].error = "non-finite estimate";
    } catch (const Error& e) {
      out[k].error = e.what();
    }
  }
}

std::vector<EstimateSample> collect(const SimulationSpec& tmpl, std::span<const Method> methods,
                                    std::size_t reps, std::uint64_t master_seed,
                                    const std::vector<Cell>& cells) {
  std::vector<EstimateSample> samples(methods.size());
  for (std::size_t k = 0; k < methods.size(); ++k) {
    auto& s = samples[k];
    s.method = methods[k];
    s.spec = tmpl;
    s.reps = reps;
    s.master_seed = master_seed;
    s.values.reserve(reps);
    for (std::size_t i = 0; i < reps; ++i) {
      const Cell& c = cells[i * methods.size() + k];
      if (c.ok) {
        s.values.push_back(c.value);
      } else {
        if (s.failures == 0) s.first_failure = c.error;
        ++s.failures;
      }
    }
  }
  return samples;
}

}  // namespace

std::vector<EstimateSample> run_battery(const SimulationSpec& tmpl, std::span<const Method> methods,
                                        std::size_t reps, std::uint64_t master_seed, int workers,
                                        SeriesTransform transform) {
  if (reps < 1) throw Error(Errc::BadArgument, "reps must be >= 1");
  tmpl.validate();
  std::vector<Cell> cells(reps * methods.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(reps);
  const int threads = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads) if (threads != 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      run_one(tmpl, methods, master_seed, idx, transform,
              std::span<Cell>(cells).subspan(idx * methods.size(), methods.size()));
    } catch (...) {
#pragma omp critical(hurst_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return collect(tmpl, methods, reps, master_seed, cells);
}

std::vector<EstimateSample> run_battery_serial(const SimulationSpec& tmpl,
                                               std::span<const Method> methods, std::size_t reps,
                                               std::uint64_t master_seed, SeriesTransform transform) {
  if (reps < 1) throw Error(Errc::BadArgument, "reps must be >= 1");
  tmpl.validate();
  std::vector<Cell> cells(reps * methods.size());
  for (std::size_t i = 0; i < reps; ++i) {
    run_one(tmpl, methods, master_seed, i, transform,
            std::span<Cell>(cells).subspan(i * methods.size(), methods.size()));
  }
  return collect(tmpl, methods, reps, master_seed, cells);
}

EstimateSample run_replications(const SimulationSpec& tmpl, Method method, std::size_t reps,
                                std::uint64_t master_seed, int workers) {
  const Method one[] = {method};
  auto samples = run_battery(tmpl, one, reps, master_seed, workers);
  if (samples[0].values.empty()) {
    throw Error(Errc::AllReplicationsFailed,
                method_label(method) + " failed in all " + std::to_string(reps) +
                    " replications (first: " + samples[0].first_failure + ")");
  }
  return std::move(samples[0]);
}

SampleSummary summarize_values(std::span<const double> values) {
  if (values.size() < 2) throw Error(Errc::TooFewValues, "summary needs at least 2 values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

SampleSummary summarize_sample(const EstimateSample& s) { return summarize_values(s.values); }

double nearest_rank_quantile(std::span<const double> sorted_values, double prob) {
  const std::size_t n = sorted_values.size();
  if (n == 0) throw Error(Errc::TooFewValues, "empty sample");
  // The 1e-9 guard keeps (1 - 0.05) * 1000 at rank 950 despite rounding.
  auto rank = static_cast<std::size_t>(std::ceil(prob * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted_values[rank - 1];
}

double CriticalValueTable::cutoff(double level) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (std::fabs(levels[i] - level) < 1e-12) return cutoffs[i];
  }
  throw Error(Errc::MissingCutoff, "no cutoff tabulated at level " + std::to_string(level) + " for " +
                                       method_label(method) + ", T = " + std::to_string(T));
}

bool CriticalValueTable::has_level(double level) const {
  return std::any_of(levels.begin(), levels.end(),
                     [&](double l) { return std::fabs(l - level) < 1e-12; });
}

CriticalValueTable critical_values(const EstimateSample& s, std::span<const double> levels) {
  if (s.values.size() < 100) {
    throw Error(Errc::TooFewValues, "critical values need at least 100 estimates, got " +
                                        std::to_string(s.values.size()));
  }
  CriticalValueTable t;
  t.method = s.method;
  t.T = s.spec.length;
  t.count = s.values.size();
  t.failures = s.failures;
  const auto summary = summarize_sample(s);
  t.mean = summary.mean;
  t.sd = summary.sd;
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  t.levels.assign(levels.begin(), levels.end());
  for (double l : t.levels) {
    if (!(l > 0.0 && l < 1.0)) throw Error(Errc::BadArgument, "significance levels must lie in (0, 1)");
  }
  std::sort(t.levels.begin(), t.levels.end(), std::greater<>());
  for (double l : t.levels) t.cutoffs.push_back(nearest_rank_quantile(sorted, 1.0 - l));
  return t;
}

PowerResult rejection_rate(const EstimateSample& sample, const CriticalValueTable& table,
                           double level) {
  if (table.method != sample.method || table.T != sample.spec.length) {
    throw Error(Errc::MissingCutoff, "critical-value table is for " + method_label(table.method) +
                                         ", T = " + std::to_string(table.T) + "; sample is " +
                                         method_label(sample.method) + ", T = " +
                                         std::to_string(sample.spec.length));
  }
  const double cut = table.cutoff(level);
  PowerResult r;
  r.method = sample.method;
  r.alternative = sample.spec;
  r.T = sample.spec.length;
  r.level = level;
  r.valid = sample.values.size();
  r.failures = sample.failures;
  r.rejections = static_cast<std::size_t>(
      std::count_if(sample.values.begin(), sample.values.end(), [&](double v) { return v > cut; }));
  r.rejection_rate = r.valid > 0 ? static_cast<double>(r.rejections) / static_cast<double>(r.valid) : 0.0;
  return r;
}

PowerResult power_function(const SimulationSpec& alt, Method method, const CriticalValueTable& table,
                           std::size_t reps, std::uint64_t master_seed, double level, int workers) {
  if (table.method != method || table.T != alt.length) {
    throw Error(Errc::MissingCutoff, "critical-value table does not match (method, T)");
  }
  table.cutoff(level);
  const auto sample = run_replications(alt, method, reps, master_seed, workers);
  return rejection_rate(sample, table, level);
}

// ---------------------------------------------------------------------------
// Cache

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

template <typename T>
T parse_field(const std::string& s, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::Parse, std::string("critical-value file: bad ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

void write_critical_values(std::ostream& out, const CriticalValueTable& table, std::size_t reps,
                           std::uint64_t master_seed) {
  out << "schema,method,T,reps,master_seed,count,failures,mean,sd,level,cutoff\n";
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    out << kCriticalValueSchema << ',' << method_tag(table.method) << ',' << table.T << ',' << reps
        << ',' << master_seed << ',' << table.count << ',' << table.failures << ','
        << format_double(table.mean) << ',' << format_double(table.sd) << ','
        << format_double(table.levels[i]) << ',' << format_double(table.cutoffs[i]) << '\n';
  }
}

CriticalValueTable read_critical_values(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("schema,", 0) != 0) {
    throw Error(Errc::Parse, "critical-value file lacks the schema header");
  }
  CriticalValueTable t;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) throw Error(Errc::Parse, "critical-value row has " + std::to_string(f.size()) + " fields");
    if (parse_field<int>(f[0], "schema") != kCriticalValueSchema) {
      throw Error(Errc::Parse, "unsupported critical-value schema " + f[0]);
    }
    if (first) {
      t.method = parse_method(f[1]);
      t.T = parse_field<std::size_t>(f[2], "T");
      t.count = parse_field<std::size_t>(f[5], "count");
      t.failures = parse_field<std::size_t>(f[6], "failures");
      t.mean = parse_field<double>(f[7], "mean");
      t.sd = parse_field<double>(f[8], "sd");
      first = false;
    }
    t.levels.push_back(parse_field<double>(f[9], "level"));
    t.cutoffs.push_back(parse_field<double>(f[10], "cutoff"));
  }
  if (first) throw Error(Errc::Parse, "critical-value file has no rows");
  return t;
}

std::string critical_value_filename(Method method, std::size_t T, std::size_t reps,
                                    std::uint64_t master_seed) {
  return "critvals-v" + std::to_string(kCriticalValueSchema) + "-" + method_tag(method) + "-T" +
         std::to_string(T) + "-r" + std::to_string(reps) + "-s" + std::to_string(master_seed) + ".csv";
}

CriticalValueCache::CriticalValueCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<CriticalValueTable> CriticalValueCache::load(Method method, std::size_t T,
                                                           std::size_t reps,
                                                           std::uint64_t master_seed) const {
  std::ifstream in(dir_ / critical_value_filename(method, T, reps, master_seed));
  if (!in) return std::nullopt;
  auto table = read_critical_values(in);
  if (table.method != method || table.T != T) return std::nullopt;
  return table;
}

void CriticalValueCache::store(const CriticalValueTable& table, std::size_t reps,
                               std::uint64_t master_seed) const {
  const auto path = dir_ / critical_value_filename(table.method, table.T, reps, master_seed);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw Error(Errc::Parse, "cannot write '" + tmp.string() + "'");
    write_critical_values(out, table, reps, master_seed);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<CriticalValueTable> CriticalValueCache::niid_tables(std::span<const Method> methods,
                                                                std::size_t T, std::size_t reps,
                                                                std::uint64_t master_seed,
                                                                std::span<const double> levels,
                                                                int workers) const {
  std::vector<std::optional<CriticalValueTable>> found(methods.size());
  std::vector<Method> missing;
  for (std::size_t k = 0; k < methods.size(); ++k) {
    found[k] = load(methods[k], T, reps, master_seed);
    const bool complete = found[k] && std::all_of(levels.begin(), levels.end(), [&](double l) {
                            return found[k]->has_level(l);
                          });
    if (!complete) {
      found[k].reset();
      missing.push_back(methods[k]);
    }
  }
  if (!missing.empty()) {
    const auto samples = run_battery(SimulationSpec::niid(T), missing, reps, master_seed, workers);
    for (const auto& s : samples) {
      const auto table = critical_values(s, levels);
      store(table, reps, master_seed);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        if (methods[k] == s.method && !found[k]) found[k] = table;
      }
    }
  }
  std::vector<CriticalValueTable> out;
  for (auto& f : found) out.push_back(std::move(*f));
  return out;
}

}  // namespace hurst
