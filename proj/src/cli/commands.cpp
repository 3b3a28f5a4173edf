#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "msm/cli.hpp"
#include "msm/error.hpp"
#include "msm/montecarlo.hpp"
#include "msm/parallel.hpp"

namespace msm::cli {
namespace {

const std::vector<std::string> kCommands = {"simulate", "acf",      "spectrum", "kdelta",
                                            "noise",    "epps",     "validate", "figure"};

Table cmd_simulate(const RunConfig& c) {
  const auto s = simulate_stream(c.model(), c.distribution(), c.T, c.seed);
  Table t;
  t.add("t", s.times);
  t.add("r", s.returns);
  return t;
}

// Per-seed curves pooled lag by lag; a single seed keeps its own error.
Table pooled_acf(const std::vector<CorrelationCurve>& runs, std::vector<double> analytic) {
  const std::size_t lags = runs.front().size();
  std::vector<double> value(lags), se(lags);
  for (std::size_t m = 0; m < lags; ++m) {
    if (runs.size() == 1) {
      value[m] = runs[0].value[m];
      se[m] = runs[0].std_error[m];
      continue;
    }
    std::vector<double> per;
    for (const auto& r : runs) per.push_back(r.value[m]);
    const auto e = pool(per);
    value[m] = e.value;
    se[m] = e.std_error;
  }
  Table t;
  t.add("lag", runs.front().abscissa);
  t.add("acf", value);
  t.add("std_error", se);
  t.add("analytic", std::move(analytic));
  return t;
}

Table cmd_acf(const RunConfig& c) {
  const auto p = c.model();
  const auto n = static_cast<std::size_t>(c.seeds);
  if (c.mode == "tick") {
    const auto runs = parallel_map(n, c.threads, [&](std::size_t i) {
      return empirical_acf(simulate_ticks(p, static_cast<std::size_t>(c.n), c.seed + i), c.max_lag);
    });
    std::vector<double> an;
    for (long long m = 0; m <= c.max_lag; ++m) an.push_back(tick_correlation_exact(p, m));
    return pooled_acf(runs, an);
  }
  const auto d = c.distribution();
  const auto runs = parallel_map(n, c.threads, [&](std::size_t i) {
    return empirical_acf(simulate_stream(p, d, c.T, c.seed + i), c.delta, c.max_lag);
  });
  std::vector<double> an;
  for (long long m = 0; m <= c.max_lag; ++m) an.push_back(k_delta(p, d, c.delta, m * c.delta, c.quad));
  auto t = pooled_acf(runs, an);
  return t;
}

Table cmd_spectrum(const RunConfig& c) {
  const auto w = c.has_grid ? c.grid : parse_grid("0:10:101:lin");
  const auto p = c.model();
  const auto d = c.distribution();
  Table t;
  t.add("omega", w);
  t.add("B", parallel_map(w.size(), c.threads, [&](std::size_t i) { return b_spectrum(p, d, w[i], c.quad); }));
  return t;
}

Table cmd_kdelta(const RunConfig& c) {
  const auto tau = c.has_grid ? c.grid : parse_grid("0:5:101:lin");
  const auto p = c.model();
  const auto d = c.distribution();
  const double k0 = k_delta(p, d, c.delta, 0.0, c.quad);
  auto k = parallel_map(tau.size(), c.threads, [&](std::size_t i) { return k_delta(p, d, c.delta, tau[i], c.quad); });
  std::vector<double> ratio(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) ratio[i] = k[i] / k0;
  Table t;
  t.add("tau", tau);
  t.add("K_Delta", std::move(k));
  t.add("K_Delta/K_0", std::move(ratio));
  return t;
}

Table cmd_noise(const RunConfig& c) {
  const auto p = c.model();
  const auto curve = noise_curve(p, c.distribution(), c.delta_grid, c.quad, c.threads);
  Table t;
  t.add("Delta", curve.abscissa);
  t.add("S_Delta", curve.value);
  t.add("S", std::vector<double>(curve.size(), noise_strength(p)));
  return t;
}

Table cmd_epps(const RunConfig& c) {
  const auto p = c.model();
  const auto d = c.distribution();
  const auto curve = epps_curve(p, d, {c.lambda}, c.delta_grid, c.quad, c.threads);
  Table t;
  t.add("Delta", curve.abscissa);
  t.add("S12", curve.value);
  if (c.mc) {
    EppsExperiment ex;
    ex.lambda = c.lambda;
    ex.T = c.T;
    ex.seeds = c.seeds;
    ex.seed = c.seed;
    ex.threads = c.threads;
    const auto e = empirical_epps(p, d, c.delta_grid, ex);
    t.add("S12_mc", e.value);
    t.add("std_error", e.std_error);
  }
  return t;
}

int cmd_validate(const RunConfig& c) {
  const auto checks = run_validation(c);
  const std::string json = validation_json(checks);
  if (c.out.empty() || c.out == "-") {
    std::cout << json << '\n';
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ParseError("cannot open output file '" + c.out + "'");
    f << json << '\n';
  }
  for (const auto& k : checks)
    if (!k.pass) return kChecksFailed;
  return kOk;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "validate") return cmd_validate(cfg);
  Table t;
  if (command == "simulate") t = cmd_simulate(cfg);
  else if (command == "acf") t = cmd_acf(cfg);
  else if (command == "spectrum") t = cmd_spectrum(cfg);
  else if (command == "kdelta") t = cmd_kdelta(cfg);
  else if (command == "noise") t = cmd_noise(cfg);
  else if (command == "epps") t = cmd_epps(cfg);
  else throw ParseError("unknown command '" + command + "'");
  emit(t, cfg.out);
  return kOk;
}

int main(int argc, char** argv) {
  CLI::App app{"Tick-by-tick return model: simulation, analytic curves and figure tables"};
  std::string command, config_path, figure;
  app.add_option("command", command, "simulate | acf | spectrum | kdelta | noise | epps | validate | figure")
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "key = value settings file; flags override it");
  app.add_option("--figure", figure, "figure id for the figure command");

  Settings flags;
  std::map<std::string, std::string> raw;
  std::map<std::string, bool> switches;
  for (const auto& key : setting_keys()) {
    if (key == "mc" || key == "full") {
      app.add_flag("--" + key, switches[key]);
      continue;
    }
    app.add_option("--" + key, raw[key]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }

  try {
    if (command.empty()) command = figure.empty() ? "" : "figure";
    if (command.empty()) throw ParseError("no command given (try --help)");
    Settings s = config_path.empty() ? Settings{} : read_config_file(config_path);
    const bool flag_alpha = app.count("--alpha") > 0, flag_d = app.count("--d") > 0;
    if (flag_alpha || flag_d) {
      s.erase("alpha");
      s.erase("d");
    }
    for (const auto& [key, value] : raw)
      if (app.count("--" + key) > 0) s[key] = value;
    for (const auto& [key, on] : switches)
      if (on) s[key] = "true";
    const RunConfig cfg = build_config(s);
    if (command == "figure") {
      if (figure.empty()) throw ParseError("figure: --figure ID is required");
      emit(run_figure(figure, cfg), cfg.out);
      return kOk;
    }
    return run_command(command, cfg);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kInsufficientData;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace msm::cli
