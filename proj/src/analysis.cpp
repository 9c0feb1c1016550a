#include "hurst/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>

#include <json.hpp>

#include "hurst/errors.hpp"
#include "hurst/rng.hpp"
#include "hurst/scaling.hpp"
#include "hurst/simulate.hpp"

namespace hurst {

namespace {

constexpr double kClassifyLevel = 0.05;

bool same_level(double a, double b) { return std::abs(a - b) < 1e-12; }

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string level_tag(double level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", level);
  std::string s = buf;
  // keep three decimals for levels like 0.005
  if (std::abs(std::stod(s) - level) > 1e-12) {
    std::snprintf(buf, sizeof buf, "%.3f", level);
    s = buf;
  }
  return s;
}

struct TableSet {
  std::vector<std::optional<CriticalValueTable>> tables;  // aligned with kReportMethods
  std::vector<std::string> errors;
};

TableSet tables_from(const std::vector<EstimateSample>& samples, std::span<const double> levels) {
  TableSet set;
  for (const auto& s : samples) {
    try {
      set.tables.emplace_back(critical_values(s, levels));
      set.errors.emplace_back();
    } catch (const Error& e) {
      set.tables.emplace_back();
      set.errors.emplace_back(e.what());
    }
  }
  return set;
}

class Orchestrator {
 public:
  explicit Orchestrator(const AnalysisConfig& c) : c_(c) {}

  TableSet recursive(const ARModel& model, std::size_t T) {
    SimulationSpec spec = SimulationSpec::ar_recursive(model, T);
    const auto samples =
        run_battery(spec, kReportMethods, c_.reps, substream_seed(c_.seed, 1), c_.workers);
    return tables_from(samples, c_.levels);
  }

  const TableSet& niid(std::size_t T) {
    auto it = niid_.find(T);
    if (it != niid_.end()) return it->second;
    const std::uint64_t seed = substream_seed(c_.seed, 2);
    TableSet set;
    if (!c_.cache_dir.empty()) {
      CriticalValueCache cache(c_.cache_dir);
      for (auto& t : cache.niid_tables(kReportMethods, T, c_.reps, seed, c_.levels, c_.workers)) {
        set.tables.emplace_back(std::move(t));
        set.errors.emplace_back();
      }
    } else {
      set = tables_from(run_battery(SimulationSpec::niid(T), kReportMethods, c_.reps, seed, c_.workers),
                        c_.levels);
    }
    return niid_.emplace(T, std::move(set)).first->second;
  }

 private:
  const AnalysisConfig& c_;
  std::map<std::size_t, TableSet> niid_;
};

std::size_t method_index(Method m) {
  for (std::size_t k = 0; k < std::size(kReportMethods); ++k) {
    if (kReportMethods[k] == m) return k;
  }
  throw Error(Errc::BadArgument, "method " + method_label(m) + " is not part of the report");
}

std::vector<TestCell> run_cells(std::span<const double> r, Variant variant, const TableSet& tables,
                                const std::string& source, std::span<const double> levels) {
  std::vector<TestCell> cells;
  for (std::size_t k = 0; k < std::size(kReportMethods); ++k) {
    TestCell cell;
    cell.method = kReportMethods[k];
    cell.variant = variant;
    cell.cutoff_source = source;
    try {
      cell.estimate = estimate(cell.method, r).value;
    } catch (const Error& e) {
      cell.error = e.what();
    }
    const auto& table = tables.tables[k];
    if (!table) {
      if (cell.error.empty()) cell.error = "cutoffs unavailable: " + tables.errors[k];
    } else {
      for (double l : levels) {
        const double cv = table->cutoff(l);
        cell.cutoffs.push_back(cv);
        cell.reject.push_back(cell.estimate && *cell.estimate > cv);
      }
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::optional<double> try_fa1(std::span<const double> r, std::string& error) {
  try {
    return estimate(Method::FA1, r).value;
  } catch (const Error& e) {
    if (error.empty()) error = e.what();
    return std::nullopt;
  }
}

}  // namespace

std::string variant_name(Variant v) { return v == Variant::Unfiltered ? "unfiltered" : "filtered"; }

void AnalysisConfig::validate() {
  if (reps < 100) throw Error(Errc::BadArgument, "reps must be >= 100 for critical values");
  if (levels.empty()) throw Error(Errc::BadArgument, "at least one significance level is required");
  for (double l : levels) {
    if (!(l > 0.0 && l < 1.0)) throw Error(Errc::BadArgument, "levels must lie in (0, 1)");
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end(), same_level), levels.end());
}

int TestCell::stars() const { return static_cast<int>(std::count(reject.begin(), reject.end(), true)); }

const TestCell* TestReport::find(Method method, Variant variant) const {
  for (const auto& c : cells) {
    if (c.method == method && c.variant == variant) return &c;
  }
  return nullptr;
}

TestReport analyze_returns(const ReturnsSeries& r, AnalysisConfig config) {
  config.validate();
  TestReport report;
  report.series_id = config.series_id;
  report.T = r.size();
  report.levels = config.levels;
  report.criterion = config.criterion;
  report.summary = summary_stats(r);

  try {
    report.ar = fit_ar(r, config.max_lag, config.criterion);
  } catch (const Error& e) {
    report.ar_error = e.what();
  }

  Orchestrator orch(config);

  bool recursive_ok = false;
  TableSet unfiltered_tables;
  if (report.ar) {
    try {
      unfiltered_tables = orch.recursive(*report.ar, report.T);
      recursive_ok = true;
    } catch (const Error& e) {
      report.ar_error = e.what();
    }
  }
  if (!recursive_ok) unfiltered_tables = orch.niid(report.T);
  report.cells = run_cells(r, Variant::Unfiltered, unfiltered_tables,
                           recursive_ok ? kSourceRecursive : kSourceNiidFallback, report.levels);

  if (report.ar) {
    const ReturnsSeries residuals = ar_filter(r, *report.ar);
    auto filtered = run_cells(residuals, Variant::Filtered, orch.niid(residuals.size()), kSourceNiid,
                              report.levels);
    for (auto& c : filtered) report.cells.push_back(std::move(c));
  }

  auto& d = report.diagnostics;
  d.fa1_original = report.find(Method::FA1, Variant::Unfiltered)->estimate;
  d.fa1_reordered = try_fa1(random_reorder(r, substream_seed(config.seed, 3)), d.error);
  d.fa1_normalized = try_fa1(normalize_transform(r), d.error);
  const auto& fa1 = orch.niid(report.T).tables[method_index(Method::FA1)];
  if (fa1) {
    d.niid_fa1_sd = fa1->sd;
  } else if (d.error.empty()) {
    d.error = "NIID FA1 table unavailable";
  }
  return report;
}

TestReport analyze_index(const PriceSeries& prices, AnalysisConfig config) {
  return analyze_returns(log_returns(prices), std::move(config));
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::LongRangeDependent: return "long-range-dependent";
    case Verdict::LStableSignature: return "L-stable-signature";
    case Verdict::WeakEvidence: return "weak-evidence";
    case Verdict::ConsistentWithNiid: return "consistent-with-NIID";
  }
  return "unknown";
}

std::string evidence_name(Evidence e) {
  switch (e) {
    case Evidence::Strong: return "strong";
    case Evidence::Weak: return "weak";
    case Evidence::None: return "none";
  }
  return "unknown";
}

Classification classify_source(const TestReport& report) {
  std::size_t li = report.levels.size();
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    if (same_level(report.levels[i], kClassifyLevel)) li = i;
  }
  if (li == report.levels.size()) {
    throw Error(Errc::IncompleteReport, "level 0.05 was not tabulated");
  }
  auto flag = [&](Method m, Variant v, bool required) -> bool {
    const TestCell* c = report.find(m, v);
    if (!c || !c->estimate || c->reject.size() != report.levels.size()) {
      if (!required) return false;
      throw Error(Errc::IncompleteReport,
                  method_label(m) + " " + variant_name(v) + " cell is missing or failed");
    }
    return c->reject[li];
  };
  const bool have_filtered = report.ar.has_value();
  const bool fa1_u = flag(Method::FA1, Variant::Unfiltered, true);
  const bool fa1_f = flag(Method::FA1, Variant::Filtered, have_filtered);
  bool rra = false, fa2 = false, fa3 = false;
  for (Variant v : {Variant::Unfiltered, Variant::Filtered}) {
    const bool req = v == Variant::Unfiltered || have_filtered;
    rra = flag(Method::RRA, v, req) || rra;
    fa2 = flag(Method::FA2, v, req) || fa2;
    fa3 = flag(Method::FA3, v, req) || fa3;
  }

  Classification c;
  std::string why;
  if (fa1_u && fa1_f && (rra || fa2)) {
    c.verdict = Verdict::LongRangeDependent;
    c.strength = Evidence::Strong;
    why = "FA1 rejects on filtered and unfiltered returns; ";
    why += rra ? "RRA rejects" : "FA2 rejects";
  } else if (fa1_u && !fa1_f && !rra && !fa2 && !fa3) {
    c.verdict = Verdict::LStableSignature;
    c.strength = Evidence::Weak;
    why = "FA1 rejects on unfiltered returns only; RRA, FA2 and FA3 do not reject";
  } else if (fa1_u && !fa1_f) {
    c.verdict = Verdict::WeakEvidence;
    c.strength = Evidence::Weak;
    why = "FA1 rejects on unfiltered returns only; other methods mixed";
  } else {
    c.verdict = Verdict::ConsistentWithNiid;
    c.strength = Evidence::None;
    why = "no rejection pattern at the 0.05 level";
  }

  const auto& d = report.diagnostics;
  if (d.fa1_original && d.niid_fa1_sd > 0.0) {
    const double bound = 2.0 * d.niid_fa1_sd;
    auto gap = [&](const char* name, const std::optional<double>& h, const char* supports) {
      if (!h) return;
      const double g = *d.fa1_original - *h;
      char buf[160];
      std::snprintf(buf, sizeof buf, "; %s gap %+.3f (%s, 2sd = %.3f)", name, g,
                    std::abs(g) > bound ? "large" : "small", bound);
      why += buf;
      if (std::abs(g) > bound) {
        why += " supports ";
        why += supports;
      }
    };
    gap("reorder", d.fa1_reordered, "long-range dependence");
    gap("normalize", d.fa1_normalized, "an L-stable signature");
  }
  c.rationale = why;
  return c;
}

std::string format_estimate(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  if (s == "-.000") s = ".000";
  return s;
}

void write_report_csv(std::ostream& out, const TestReport& report) {
  out << "series,variant,method,estimate,cutoff_source";
  for (double l : report.levels) out << ",cv_" << level_tag(l);
  for (double l : report.levels) out << ",reject_" << level_tag(l);
  out << ",stars,error\n";
  for (const auto& c : report.cells) {
    out << report.series_id << ',' << variant_name(c.variant) << ',' << method_tag(c.method) << ','
        << (c.estimate ? fixed6(*c.estimate) : "") << ',' << c.cutoff_source;
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      out << ',' << (i < c.cutoffs.size() ? fixed6(c.cutoffs[i]) : "");
    }
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      out << ',' << (i < c.reject.size() ? (c.reject[i] ? "1" : "0") : "");
    }
    std::string err = c.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << ',' << c.stars() << ',' << err << '\n';
  }
}

void write_table_csv(std::ostream& out, std::span<const TestReport> reports) {
  out << "series,variant";
  for (Method m : kReportMethods) out << ',' << method_label(m);
  out << '\n';
  for (const auto& rep : reports) {
    for (Variant v : {Variant::Unfiltered, Variant::Filtered}) {
      if (v == Variant::Filtered && !rep.ar) continue;
      out << rep.series_id << ',' << variant_name(v);
      for (Method m : kReportMethods) {
        const TestCell* c = rep.find(m, v);
        out << ',';
        if (c && c->estimate) out << format_estimate(*c->estimate) << std::string(c->stars(), '*');
        else out << "NA";
      }
      out << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, std::span<const TestReport> reports) {
  out << "series,T,mean,sd,skewness,kurtosis,ar_order,ar_criterion,fa1_original,fa1_reordered,"
         "fa1_normalized,niid_fa1_sd,verdict,strength\n";
  auto opt = [](const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); };
  for (const auto& rep : reports) {
    const auto& s = rep.summary;
    const auto& d = rep.diagnostics;
    out << rep.series_id << ',' << rep.T << ',' << fixed6(s.mean) << ',' << fixed6(s.sd) << ','
        << fixed6(s.skewness) << ',' << fixed6(s.kurtosis) << ','
        << (rep.ar ? std::to_string(rep.ar->order) : "") << ','
        << (rep.criterion == OrderCriterion::AIC ? "aic" : "bic") << ',' << opt(d.fa1_original) << ','
        << opt(d.fa1_reordered) << ',' << opt(d.fa1_normalized) << ',' << fixed6(d.niid_fa1_sd);
    try {
      const auto c = classify_source(rep);
      out << ',' << verdict_name(c.verdict) << ',' << evidence_name(c.strength) << '\n';
    } catch (const Error&) {
      out << ",incomplete,none\n";
    }
  }
}

void write_report_json(std::ostream& out, const TestReport& report, const Classification& c) {
  using nlohmann::json;
  json j;
  j["series"] = report.series_id;
  j["T"] = report.T;
  j["levels"] = report.levels;
  j["summary"] = {{"mean", report.summary.mean},
                  {"sd", report.summary.sd},
                  {"skewness", report.summary.skewness},
                  {"kurtosis", report.summary.kurtosis}};
  if (report.ar) {
    j["ar"] = {{"order", report.ar->order},
               {"intercept", report.ar->intercept},
               {"coefficients", report.ar->coefficients},
               {"residual_sd", report.ar->residual_sd}};
  } else {
    j["ar"] = nullptr;
  }
  if (!report.ar_error.empty()) j["ar_error"] = report.ar_error;
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json jc = {{"method", method_tag(cell.method)},
               {"variant", variant_name(cell.variant)},
               {"cutoff_source", cell.cutoff_source},
               {"cutoffs", cell.cutoffs},
               {"reject", cell.reject},
               {"stars", cell.stars()}};
    jc["estimate"] = cell.estimate ? json(*cell.estimate) : json(nullptr);
    if (!cell.error.empty()) jc["error"] = cell.error;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  const auto& d = report.diagnostics;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j["diagnostics"] = {{"fa1_original", opt(d.fa1_original)},
                      {"fa1_reordered", opt(d.fa1_reordered)},
                      {"fa1_normalized", opt(d.fa1_normalized)},
                      {"niid_fa1_sd", d.niid_fa1_sd}};
  j["classification"] = {{"verdict", verdict_name(c.verdict)},
                         {"strength", evidence_name(c.strength)},
                         {"rationale", c.rationale}};
  out << j.dump(2) << '\n';
}

}  // namespace hurst
