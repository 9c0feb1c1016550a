#include "hurst/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hurst/analysis.hpp"
#include "hurst/errors.hpp"
#include "hurst/estimators.hpp"
#include "hurst/montecarlo.hpp"
#include "hurst/rng.hpp"
#include "hurst/scaling.hpp"
#include "hurst/simulate.hpp"
#include "hurst/spectral_tail.hpp"
#include "hurst/timeseries.hpp"

namespace hurst {

namespace {

std::string fmt(double v, const char* f = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string level_header(const char* prefix, double level) { return prefix + fmt(level, "%.2f"); }

/// Writes to `path`, or to `fallback` when path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(Errc::Parse, "cannot write '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct SpecOptions {
  std::string model = "niid";
  std::size_t T = 1000;
  std::uint64_t seed = 42;
  double d = 0.0;
  double hurst = -1.0;
  double alpha = 2.0, beta = 0.0, mu = 0.0, sigma = 1.0;
  int df = 10;
  std::vector<double> ar_coef;
  double ar_intercept = 0.0;
  double ar_sd = 1.0;
  std::size_t burn_in = 1000;
  std::size_t truncation = 4999;
  std::string convolution = "fft";

  void add_to(CLI::App* app, bool with_model) {
    if (with_model) {
      app->add_option("--model", model, "niid|arfima|lstable|studentt|ar")->capture_default_str();
      app->add_option("-T,--length", T, "series length")->capture_default_str();
      app->add_option("--seed", seed, "random seed")->capture_default_str();
    }
    app->add_option("--d", d, "ARFIMA fractional order");
    app->add_option("--alpha", alpha, "stable characteristic exponent");
    app->add_option("--beta", beta, "stable skewness");
    app->add_option("--mu", mu, "stable location");
    app->add_option("--sigma", sigma, "stable scale");
    app->add_option("--df", df, "Student-t degrees of freedom");
    app->add_option("--ar-coef", ar_coef, "AR coefficients phi_1..phi_p")->delimiter(',');
    app->add_option("--ar-intercept", ar_intercept, "AR intercept");
    app->add_option("--ar-sd", ar_sd, "AR innovation sd");
    app->add_option("--burn-in", burn_in, "AR burn-in")->capture_default_str();
    app->add_option("--truncation", truncation, "ARFIMA MA truncation lag")->capture_default_str();
    app->add_option("--convolution", convolution, "fft|direct")->capture_default_str();
  }

  /// `H` overrides --d / --alpha when >= 0.
  SimulationSpec build(Model m, std::size_t length, std::uint64_t s, double H) const {
    SimulationSpec spec;
    switch (m) {
      case Model::NIID: spec = SimulationSpec::niid(length, s); break;
      case Model::ARFIMA:
        spec = H >= 0 ? SimulationSpec::arfima_for_hurst(H, length, s)
                      : SimulationSpec::arfima(d, length, s);
        break;
      case Model::LStable:
        spec = H >= 0 ? SimulationSpec::lstable_for_hurst(H, length, s)
                      : SimulationSpec::lstable(alpha, beta, mu, sigma, length, s);
        break;
      case Model::StudentT: spec = SimulationSpec::student_t(df, length, s); break;
      case Model::ARRecursive: {
        ARModel ar;
        ar.order = ar_coef.size();
        ar.coefficients = ar_coef;
        ar.intercept = ar_intercept;
        ar.residual_sd = ar_sd;
        spec = SimulationSpec::ar_recursive(ar, length, s);
        break;
      }
    }
    spec.burn_in = burn_in;
    spec.truncation = truncation;
    if (convolution == "direct") spec.convolution = ConvolutionMethod::Direct;
    else if (convolution == "fft") spec.convolution = ConvolutionMethod::Fft;
    else throw Error(Errc::BadArgument, "unknown convolution '" + convolution + "' (fft|direct)");
    spec.validate();
    return spec;
  }
};

std::vector<Method> parse_methods(const std::vector<std::string>& tags) {
  std::vector<Method> out;
  if (tags.empty() || (tags.size() == 1 && tags[0] == "all")) {
    out.assign(std::begin(kAllMethods), std::end(kAllMethods));
    return out;
  }
  for (const auto& t : tags) out.push_back(parse_method(t));
  return out;
}

std::vector<CriticalValueTable> null_tables(const std::vector<Method>& methods, std::size_t T,
                                            std::size_t reps, std::uint64_t seed,
                                            const std::vector<double>& levels,
                                            const std::string& cache_dir, int workers) {
  if (!cache_dir.empty()) {
    return CriticalValueCache(cache_dir).niid_tables(methods, T, reps, seed, levels, workers);
  }
  std::vector<CriticalValueTable> out;
  for (const auto& s : run_battery(SimulationSpec::niid(T), methods, reps, seed, workers)) {
    out.push_back(critical_values(s, levels));
  }
  return out;
}

int selftest(std::ostream& out) {
  int failed = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& f) {
    bool ok = false;
    std::string why;
    try {
      ok = f();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << why << '\n';
    if (!ok) ++failed;
  };

  check("rs_statistic (1,2,1,2) n=2 equals 1", [] {
    const double r[] = {1, 2, 1, 2};
    return std::abs(rs_statistic(r, 2) - 1.0) < 1e-12;
  });
  check("partition_function constant returns", [] {
    const double r[] = {0.3, 0.3, 0.3, 0.3};
    LogPricePath p(r);
    return std::abs(partition_function(p, 2, 1.5) - 2.0 * std::pow(0.6, 1.5)) < 1e-12;
  });
  check("time_scale_grid T=1000 has 20 scales from 5 to 86", [] {
    auto g = time_scale_grid(1000);
    return g.scales.size() == 20 && g.scales.front() == 5 && g.scales.back() == 86;
  });
  check("ARFIMA d=0 reproduces NIID", [] {
    auto a = simulate(SimulationSpec::arfima(0.0, 500, 7));
    auto b = simulate(SimulationSpec::niid(500, 7));
    return std::equal(a.values().begin(), a.values().end(), b.values().begin());
  });
  check("FFT and direct MA filter agree", [] {
    auto w = arfima_weights(0.3, 300);
    RngStream rng(11);
    std::vector<double> x(1300);
    for (auto& v : x) v = rng.normal();
    auto f = ma_filter_fft(w.values, x);
    auto d = ma_filter_direct(w.values, x);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(f[i] - d[i]) > 1e-9) return false;
    }
    return true;
  });
  check("FFT and direct periodogram agree", [] {
    auto r = simulate(SimulationSpec::niid(257, 3));
    auto a = periodogram(r, 128);
    auto b = periodogram_direct(r, 128);
    for (std::size_t j = 0; j < 128; ++j) {
      if (std::abs(a.ordinates[j] - b.ordinates[j]) > 1e-9 * (1.0 + b.ordinates[j])) return false;
    }
    return true;
  });
  check("replications identical with 1 and 4 workers", [] {
    const Method m[] = {Method::RRA, Method::Hill};
    auto a = run_battery(SimulationSpec::niid(300), m, 24, 5, 1);
    auto b = run_battery(SimulationSpec::niid(300), m, 24, 5, 4);
    return a[0].values == b[0].values && a[1].values == b[1].values;
  });
  out << (failed == 0 ? "selftest: all checks passed\n" : "selftest: failures\n");
  return failed == 0 ? kExitOk : kExitData;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hurst exponent estimation and Monte Carlo testing"};
  app.require_subcommand(1);
  app.name("hurst");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a return series");
  SpecOptions sim_opts;
  double sim_hurst = -1.0;
  std::string sim_output;
  sim_opts.add_to(sim, true);
  sim->add_option("--hurst", sim_hurst, "target H (arfima: d = H - 0.5; lstable: alpha = 1/H)");
  sim->add_option("-o,--output", sim_output, "output CSV (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate H or d from a series");
  std::string est_method, est_input;
  bool est_prices = false;
  est->add_option("--method", est_method, "rra|fa1|fa2|fa3|gph|robinson|pickands|hill|hr")
      ->required();
  est->add_option("--input", est_input, "returns CSV (or prices with --prices)")->required();
  est->add_flag("--prices", est_prices, "input is a date,close price file");

  // critvals
  auto* cv = app.add_subcommand("critvals", "NIID critical values");
  std::vector<std::string> cv_methods;
  std::vector<std::size_t> cv_T{1000};
  std::size_t cv_reps = 5000;
  std::uint64_t cv_seed = 42;
  std::vector<double> cv_levels(std::begin(kDefaultLevels), std::end(kDefaultLevels));
  std::string cv_cache, cv_output;
  int cv_workers = 0;
  cv->add_option("--method", cv_methods, "methods (default all)")->delimiter(',');
  cv->add_option("-T,--length", cv_T, "series lengths")->delimiter(',')->capture_default_str();
  cv->add_option("--reps", cv_reps, "replications")->capture_default_str();
  cv->add_option("--seed", cv_seed, "master seed")->capture_default_str();
  cv->add_option("--levels", cv_levels, "significance levels")->delimiter(',');
  cv->add_option("--cache-dir", cv_cache, "critical-value cache directory");
  cv->add_option("--workers", cv_workers, "OpenMP threads (0 = default)");
  cv->add_option("-o,--output", cv_output, "output CSV (default stdout)");

  // power
  auto* pw = app.add_subcommand("power", "rejection rates against an alternative");
  SpecOptions pw_opts;
  pw_opts.model = "arfima";
  std::vector<std::string> pw_methods;
  std::vector<double> pw_hurst{0.54, 0.58, 0.62};
  std::vector<std::size_t> pw_T{2000};
  std::size_t pw_reps = 5000, pw_null_reps = 0;
  std::uint64_t pw_seed = 42;
  double pw_level = 0.05;
  std::string pw_cache, pw_output;
  int pw_workers = 0;
  pw->add_option("--model", pw_opts.model, "alternative: arfima|lstable|studentt|niid")
      ->capture_default_str();
  pw->add_option("--hurst", pw_hurst, "true H values of the alternative")->delimiter(',');
  pw->add_option("-T,--length", pw_T, "series lengths")->delimiter(',');
  pw->add_option("--method", pw_methods, "methods (default all)")->delimiter(',');
  pw->add_option("--reps", pw_reps, "replications of the alternative")->capture_default_str();
  pw->add_option("--null-reps", pw_null_reps, "replications for the NIID cutoffs (default --reps)");
  pw->add_option("--seed", pw_seed, "master seed")->capture_default_str();
  pw->add_option("--level", pw_level, "significance level")->capture_default_str();
  pw->add_option("--cache-dir", pw_cache, "critical-value cache directory");
  pw->add_option("--workers", pw_workers, "OpenMP threads (0 = default)");
  pw->add_option("-o,--output", pw_output, "output CSV (default stdout)");
  pw_opts.add_to(pw, false);

  // analyze
  auto* an = app.add_subcommand("analyze", "test a price series for self-affinity");
  AnalysisConfig an_cfg;
  std::string an_input, an_out_dir, an_criterion = "aic";
  bool an_returns = false, an_json = false;
  an->add_option("--input", an_input, "price CSV with date,close columns")->required();
  an->add_flag("--returns", an_returns, "input is already a returns column");
  an->add_option("--reps", an_cfg.reps, "replications per critical-value table")
      ->capture_default_str();
  an->add_option("--seed", an_cfg.seed, "master seed")->capture_default_str();
  an->add_option("--levels", an_cfg.levels, "significance levels")->delimiter(',');
  an->add_option("--max-lag", an_cfg.max_lag, "largest AR order considered")->capture_default_str();
  an->add_option("--criterion", an_criterion, "aic|bic")->capture_default_str();
  an->add_option("--out-dir", an_out_dir, "write report.csv, table.csv, summary.csv here");
  an->add_option("--cache-dir", an_cfg.cache_dir, "critical-value cache directory");
  an->add_option("--series-id", an_cfg.series_id, "label used in the report");
  an->add_option("--workers", an_cfg.workers, "OpenMP threads (0 = default)");
  an->add_flag("--json", an_json, "also write report.json (needs --out-dir)");

  auto* st = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      const auto spec = sim_opts.build(parse_model(sim_opts.model), sim_opts.T, sim_opts.seed, sim_hurst);
      const auto r = simulate(spec);
      Sink sink(sim_output, out);
      write_values_csv(*sink, r.values());
    } else if (*est) {
      const Method m = parse_method(est_method);
      const ReturnsSeries r =
          est_prices ? log_returns(read_price_csv_file(est_input)) : read_values_csv_file(est_input);
      const auto e = estimate(m, r);
      out << "method,H_or_d,intercept,n_points\n"
          << method_tag(m) << ',' << fmt(e.value) << ',' << fmt(e.intercept) << ',' << e.n_points
          << '\n';
    } else if (*cv) {
      const auto methods = parse_methods(cv_methods);
      std::vector<double> levels = cv_levels;
      std::sort(levels.begin(), levels.end(), std::greater<>());
      Sink sink(cv_output, out);
      auto& os = *sink;
      os << "method,T,reps,count,failures,mean,sd";
      for (double l : levels) os << ',' << level_header("cv_", l);
      os << '\n';
      for (std::size_t T : cv_T) {
        for (const auto& t : null_tables(methods, T, cv_reps, cv_seed, levels, cv_cache, cv_workers)) {
          os << method_tag(t.method) << ',' << T << ',' << cv_reps << ',' << t.count << ','
             << t.failures << ',' << fmt(t.mean) << ',' << fmt(t.sd);
          for (double l : levels) os << ',' << fmt(t.cutoff(l));
          os << '\n';
        }
      }
    } else if (*pw) {
      const auto methods = parse_methods(pw_methods);
      const Model model = parse_model(pw_opts.model);
      const std::size_t null_reps = pw_null_reps ? pw_null_reps : pw_reps;
      const std::vector<double> level{pw_level};
      Sink sink(pw_output, out);
      auto& os = *sink;
      os << "model,H,T,method,level,cutoff,rejection_rate,rejections,valid,failures\n";
      const std::vector<double> hs =
          (model == Model::ARFIMA || model == Model::LStable) ? pw_hurst : std::vector<double>{-1.0};
      for (std::size_t T : pw_T) {
        const auto tables =
            null_tables(methods, T, null_reps, pw_seed, level, pw_cache, pw_workers);
        for (std::size_t hi = 0; hi < hs.size(); ++hi) {
          const auto alt = pw_opts.build(model, T, 0, hs[hi]);
          const auto samples =
              run_battery(alt, methods, pw_reps, substream_seed(pw_seed, 100 + hi), pw_workers);
          for (std::size_t k = 0; k < methods.size(); ++k) {
            const auto res = rejection_rate(samples[k], tables[k], pw_level);
            os << model_name(model) << ',' << (hs[hi] >= 0 ? fmt(hs[hi], "%.2f") : "") << ',' << T
               << ',' << method_tag(methods[k]) << ',' << fmt(pw_level, "%.2f") << ','
               << fmt(tables[k].cutoff(pw_level)) << ',' << fmt(res.rejection_rate, "%.4f") << ','
               << res.rejections << ',' << res.valid << ',' << res.failures << '\n';
          }
        }
      }
    } else if (*an) {
      an_cfg.criterion = parse_order_criterion(an_criterion);
      an_cfg.validate();  // bad options are a usage error even when the input is also bad
      if (an_cfg.series_id == "series") {
        an_cfg.series_id = std::filesystem::path(an_input).stem().string();
      }
      const TestReport report = an_returns ? analyze_returns(read_values_csv_file(an_input), an_cfg)
                                           : analyze_index(read_price_csv_file(an_input), an_cfg);
      const Classification c = classify_source(report);
      write_report_csv(out, report);
      out << "classification: " << verdict_name(c.verdict) << " (" << evidence_name(c.strength)
          << "): " << c.rationale << '\n';
      if (!an_out_dir.empty()) {
        std::filesystem::create_directories(an_out_dir);
        const std::filesystem::path dir(an_out_dir);
        const TestReport one[] = {report};
        write_report_csv(*Sink((dir / "report.csv").string(), out), report);
        write_table_csv(*Sink((dir / "table.csv").string(), out), one);
        write_summary_csv(*Sink((dir / "summary.csv").string(), out), one);
        if (an_json) write_report_json(*Sink((dir / "report.json").string(), out), report, c);
      } else if (an_json) {
        throw Error(Errc::BadArgument, "--json needs --out-dir");
      }
    } else if (*st) {
      return selftest(out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::BadArgument ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace hurst
