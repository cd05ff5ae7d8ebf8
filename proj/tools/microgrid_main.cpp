// Command-line front end: ingest meteorological CSVs, build and reduce
// scenario sets, run dispatch/investment/robust solves, and drive the
// whole pipeline offline on the bundled synthetic dataset.
//
// Exit codes: 0 success, 2 infeasible model, 3 non-convergence,
// 1 any other error. MICROGRID_LOG=debug|info|warn controls verbosity.

#include <CLI11.hpp>

#include "microgrid/io.hpp"
#include "microgrid/synthetic.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace microgrid;

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitNonConverged = 3;

int log_level() {
  const char* env = std::getenv("MICROGRID_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "debug") return 3;
  if (v == "info") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[microgrid] " << msg << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<RenewableProfile> profiles_of(const MeteoSeries& series,
                                          const TurbineCurve& curve) {
  std::vector<RenewableProfile> days;
  days.reserve(series.days());
  for (int d = 0; d < series.days(); ++d) {
    days.push_back(series.kind == MeteoKind::SolarRadiation
                       ? solar_profile(series, d)
                       : wind_profile(series, d, curve));
  }
  return days;
}

Vec concat_profiles(const std::vector<RenewableProfile>& days) {
  Vec all(static_cast<Eigen::Index>(days.size()) * kHoursPerDay);
  for (std::size_t d = 0; d < days.size(); ++d) {
    all.segment(static_cast<Eigen::Index>(d) * kHoursPerDay, kHoursPerDay) = days[d].hours;
  }
  return all;
}

std::vector<double> parse_pct_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item) / 100.0);
  }
  if (out.empty()) throw Error("empty percentage list");
  return out;
}

// --- subcommand payloads -------------------------------------------------

struct IngestArgs {
  std::string input, output, type = "solar", station;
  TurbineCurve curve;
};

int run_ingest(const IngestArgs& a) {
  const MeteoKind kind = a.type == "wind" ? MeteoKind::WindSpeed : MeteoKind::SolarRadiation;
  MeteoSeries series = read_meteo_csv(a.input, kind, a.station);
  log_info("ingested " + std::to_string(series.days()) + " days from " + a.input);
  write_profiles_csv(a.output, profiles_of(series, a.curve));
  return 0;
}

struct BuildArgs {
  std::string solar, wind, output;
};

int run_build(const BuildArgs& a) {
  auto set = build_scenarios(read_profiles_csv(a.solar), read_profiles_csv(a.wind));
  write_scenario_set(a.output, set);
  log_info("built " + std::to_string(set.size()) + " scenarios");
  return 0;
}

struct ReduceArgs {
  std::string input, output;
  int keep = 10;
  double solar_weight = 1.0, wind_weight = 1.0;
};

int run_reduce(const ReduceArgs& a) {
  auto set = read_scenario_set(a.input);
  auto res = reduce_detailed(set, a.keep, ScenarioMetric{a.solar_weight, a.wind_weight});
  write_scenario_set(a.output, res.set);
  log_info("kept " + std::to_string(a.keep) + " of " + std::to_string(set.size()) +
           " scenarios, transport distance " + std::to_string(res.kantorovich));
  return 0;
}

struct DispatchArgs {
  std::string spec, scenario, mode = "central", outdir = ".";
  int index = 0;
  double solar_kw = 0, wind_kw = 0, storage_kwh = 0;
};

int run_dispatch(const DispatchArgs& a) {
  SpecConfig config = read_spec_config(a.spec);
  ScenarioSet set = read_scenario_set(a.scenario);
  if (a.index < 0 || a.index >= set.size()) {
    throw Error("scenario index " + std::to_string(a.index) + " out of range");
  }
  Portfolio pf;
  pf.solar_kw = a.solar_kw;
  pf.wind_kw = a.wind_kw;
  pf.storage_kwh = a.storage_kwh;
  pf.cost_solar = config.costs.solar;
  pf.cost_wind = config.costs.wind;
  pf.cost_storage = config.costs.storage;
  pf.budget = config.budget;

  fs::create_directories(a.outdir);
  const fs::path out(a.outdir);
  std::vector<IterationRecord> trace;
  DispatchSolution sol;
  bool converged = true;
  if (a.mode == "decentralized") {
    auto res = run_decentralized(config.spec, pf, set[a.index], config.solver);
    sol = std::move(res.solution);
    trace = std::move(res.trace);
    converged = res.converged;
  } else {
    sol = solve_central(config.spec, pf, set[a.index], config.solver);
    converged = sol.converged;
  }
  auto bad = check_dispatch(sol, config.spec, pf, set[a.index]);
  for (const auto& b : bad) std::cerr << "constraint check: " << b << "\n";
  write_text(out / "dispatch.json", dispatch_to_json(sol));
  write_trace_csv(out / "trace.csv", trace);
  log_info("dispatch objective " + std::to_string(sol.objective));
  if (!bad.empty()) return 1;
  return converged ? 0 : kExitNonConverged;
}

struct InvestArgs {
  std::string spec, scenarios, outdir = ".";
  double budget = -1.0;  // <0: take the config value
  bool no_demand_response = false;
  int sweep_points = 6;
};

int run_invest(const InvestArgs& a) {
  SpecConfig config = read_spec_config(a.spec);
  ScenarioSet set = read_scenario_set(a.scenarios);
  const double budget = a.budget >= 0 ? a.budget : config.budget;

  InvestmentOptions options;
  options.demand_response = !a.no_demand_response;
  auto sol = solve_ep1(config.spec, set, config.costs, budget, config.solver, options);

  fs::create_directories(a.outdir);
  const fs::path out(a.outdir);
  write_text(out / "investment.json", investment_to_json(sol));

  std::vector<double> budgets;
  for (int i = 1; i <= a.sweep_points; ++i) {
    budgets.push_back(budget * 1.5 * i / a.sweep_points);
  }
  auto sweep = sweep_budgets(config.spec, set, config.costs, budgets, config.solver, options);
  write_budget_sweep_csv(out / "budget_sweep.csv", sweep);

  log_info("optimal expense " + std::to_string(sol.capital_cost) + " of budget " +
           std::to_string(budget));
  return sol.converged ? 0 : kExitNonConverged;
}

struct RobustArgs {
  std::string spec, scenarios, outdir = ".";
  double budget = -1.0;
  double error_pct = 10.0;
  std::string sweep = "0,5,10,15,20";
};

int run_robust(const RobustArgs& a) {
  SpecConfig config = read_spec_config(a.spec);
  ScenarioSet set = read_scenario_set(a.scenarios);
  const double budget = a.budget >= 0 ? a.budget : config.budget;

  fs::create_directories(a.outdir);
  const fs::path out(a.outdir);
  auto sol = solve_rp1(config.spec, set, UncertaintySet::relative(set, a.error_pct / 100.0),
                       config.costs, budget, config.solver);
  write_text(out / "robust_investment.json", investment_to_json(sol));

  auto sweep = sweep_errors(config.spec, set, config.costs, budget,
                            parse_pct_list(a.sweep), config.solver);
  write_error_sweep_csv(out / "error_sweep.csv", sweep);
  log_info("robust expense " + std::to_string(sol.capital_cost) + " at " +
           std::to_string(a.error_pct) + "% error");
  return sol.converged ? 0 : kExitNonConverged;
}

struct ReportArgs {
  std::string config;
};

int run_report(const ReportArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw Error("cannot open " + a.config);
  json cfg = json::parse(in);
  const fs::path base = fs::path(a.config).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  const fs::path outdir = resolve(cfg.value("output", "report_out"));
  fs::create_directories(outdir);

  SpecConfig spec_config = read_spec_config(resolve(cfg.at("spec").get<std::string>()));
  TurbineCurve curve;
  if (cfg.contains("turbine")) {
    curve.cut_in = cfg["turbine"].value("cut_in", 3.0);
    curve.rated = cfg["turbine"].value("rated", 12.0);
    curve.cut_out = cfg["turbine"].value("cut_out", 25.0);
  }
  const int keep = cfg.value("keep", 10);
  const int sweep_points = cfg.value("budget_sweep_points", 5);
  std::vector<double> error_fracs{0.0, 0.05, 0.10, 0.15, 0.20};
  if (cfg.contains("error_sweep_pcts")) {
    error_fracs.clear();
    for (const auto& p : cfg["error_sweep_pcts"]) {
      error_fracs.push_back(p.get<double>() / 100.0);
    }
  }

  json manifest;
  manifest["version"] = kReportVersion;
  manifest["stages"] = json::object();
  int exit_code = 0;
  auto stage = [&](const std::string& name, auto&& body) {
    if (exit_code != 0) {
      manifest["stages"][name] = {{"status", "skipped"}};
      return;
    }
    try {
      log_info("stage " + name);
      body();
      manifest["stages"][name] = {{"status", "ok"}};
    } catch (const InfeasibleError& e) {
      manifest["stages"][name] = {{"status", "infeasible"}, {"error", e.what()}};
      std::cerr << "stage " << name << " infeasible: " << e.what() << "\n";
      exit_code = kExitInfeasible;
    } catch (const std::exception& e) {
      manifest["stages"][name] = {{"status", "failed"}, {"error", e.what()}};
      std::cerr << "stage " << name << " failed: " << e.what() << "\n";
      exit_code = 1;
    }
  };

  ScenarioSet reduced;
  stage("ingest", [&] {
    MeteoSeries solar = read_meteo_csv(resolve(cfg.at("solar_csv").get<std::string>()),
                                       MeteoKind::SolarRadiation);
    MeteoSeries wind = read_meteo_csv(resolve(cfg.at("wind_csv").get<std::string>()),
                                      MeteoKind::WindSpeed);
    auto solar_days = profiles_of(solar, curve);
    auto wind_days = profiles_of(wind, curve);
    write_profiles_csv(outdir / "solar_profiles.csv", solar_days);
    write_profiles_csv(outdir / "wind_profiles.csv", wind_days);
    manifest["correlation_solar_wind"] =
        correlation(concat_profiles(solar_days), concat_profiles(wind_days));

    auto full = build_scenarios(solar_days, wind_days);
    auto res = reduce_detailed(full, std::min(keep, full.size()));
    manifest["scenario_reduction"] = {{"from", full.size()},
                                      {"to", res.set.size()},
                                      {"kantorovich", res.kantorovich}};
    write_scenario_set(outdir / "scenarios.json", res.set);
    reduced = std::move(res.set);
  });

  InvestmentSolution invest;
  stage("invest", [&] {
    invest = solve_ep1(spec_config.spec, reduced, spec_config.costs, spec_config.budget,
                       spec_config.solver);
    write_text(outdir / "investment.json", investment_to_json(invest));
    for (int w = 0; w < reduced.size(); ++w) {
      auto bad = check_dispatch(invest.dispatches[w], spec_config.spec, invest.portfolio,
                                reduced[w]);
      if (!bad.empty()) throw Error("scenario " + std::to_string(w) + ": " + bad.front());
    }
    manifest["investment"] = {{"expense", invest.capital_cost},
                              {"overall_cost", invest.overall_cost}};
    if (!invest.converged) exit_code = kExitNonConverged;
  });

  stage("baseline", [&] {
    InvestmentOptions pinned;
    pinned.demand_response = false;
    auto base = solve_ep1(spec_config.spec, reduced, spec_config.costs, spec_config.budget,
                          spec_config.solver, pinned);
    write_text(outdir / "investment_no_dr.json", investment_to_json(base, false));
    manifest["demand_response_saving"] = base.overall_cost - invest.overall_cost;
  });

  stage("dispatch", [&] {
    int top = 0;
    for (int w = 0; w < reduced.size(); ++w) {
      if (reduced[w].probability > reduced[top].probability) top = w;
    }
    auto res = run_decentralized(spec_config.spec, invest.portfolio, reduced[top],
                                 spec_config.solver);
    auto bad = check_dispatch(res.solution, spec_config.spec, invest.portfolio, reduced[top]);
    if (!bad.empty()) throw Error(bad.front());
    write_text(outdir / "dispatch_decentralized.json", dispatch_to_json(res.solution));
    write_trace_csv(outdir / "trace.csv", res.trace);
    if (!res.converged) exit_code = kExitNonConverged;
  });

  stage("budget_sweep", [&] {
    std::vector<double> budgets;
    for (int i = 1; i <= sweep_points; ++i) {
      budgets.push_back(spec_config.budget * 1.5 * i / sweep_points);
    }
    auto sweep = sweep_budgets(spec_config.spec, reduced, spec_config.costs, budgets,
                               spec_config.solver);
    write_budget_sweep_csv(outdir / "budget_sweep.csv", sweep);
  });

  stage("robust", [&] {
    auto sweep = sweep_errors(spec_config.spec, reduced, spec_config.costs,
                              spec_config.budget, error_fracs, spec_config.solver);
    write_error_sweep_csv(outdir / "error_sweep.csv", sweep);
  });

  write_text(outdir / "manifest.json", manifest.dump(2) + "\n");
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-period microgrid planning: scenarios, dispatch pricing, investment"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* cmd_ingest = app.add_subcommand("ingest", "Convert a station CSV to per-unit profiles");
  cmd_ingest->add_option("--input", ingest.input, "CSV with header timestamp,value")->required();
  cmd_ingest->add_option("--type", ingest.type, "solar|wind")
      ->check(CLI::IsMember({"solar", "wind"}));
  cmd_ingest->add_option("--output", ingest.output, "profile CSV to write")->required();
  cmd_ingest->add_option("--station", ingest.station, "station label");
  cmd_ingest->add_option("--cut-in", ingest.curve.cut_in, "turbine cut-in speed, m/s");
  cmd_ingest->add_option("--rated", ingest.curve.rated, "turbine rated speed, m/s");
  cmd_ingest->add_option("--cut-out", ingest.curve.cut_out, "turbine cut-out speed, m/s");

  auto* cmd_scen = app.add_subcommand("scenarios", "Build or reduce scenario sets");
  cmd_scen->require_subcommand(1);
  BuildArgs build;
  auto* cmd_build = cmd_scen->add_subcommand("build", "Pair solar/wind profile days");
  cmd_build->add_option("--solar", build.solar, "solar profile CSV")->required();
  cmd_build->add_option("--wind", build.wind, "wind profile CSV")->required();
  cmd_build->add_option("--output,-o", build.output, "scenario JSON")->required();
  ReduceArgs reduce_args;
  auto* cmd_reduce = cmd_scen->add_subcommand("reduce", "Forward reduction to a smaller set");
  cmd_reduce->add_option("--input", reduce_args.input, "scenario JSON")->required();
  cmd_reduce->add_option("--keep", reduce_args.keep, "scenarios to keep")->required();
  cmd_reduce->add_option("--output,-o", reduce_args.output, "scenario JSON")->required();
  cmd_reduce->add_option("--solar-weight", reduce_args.solar_weight, "metric weight");
  cmd_reduce->add_option("--wind-weight", reduce_args.wind_weight, "metric weight");

  DispatchArgs dispatch;
  auto* cmd_dispatch = app.add_subcommand("dispatch", "Solve one scenario's scheduling");
  cmd_dispatch->add_option("--spec", dispatch.spec, "microgrid config JSON")->required();
  cmd_dispatch->add_option("--scenario", dispatch.scenario, "scenario JSON")->required();
  cmd_dispatch->add_option("--index", dispatch.index, "scenario index");
  cmd_dispatch->add_option("--mode", dispatch.mode, "central|decentralized")
      ->check(CLI::IsMember({"central", "decentralized"}));
  cmd_dispatch->add_option("--solar-kw", dispatch.solar_kw, "installed solar capacity");
  cmd_dispatch->add_option("--wind-kw", dispatch.wind_kw, "installed wind capacity");
  cmd_dispatch->add_option("--storage-kwh", dispatch.storage_kwh, "installed storage");
  cmd_dispatch->add_option("--output,-o", dispatch.outdir, "output directory");

  InvestArgs invest;
  auto* cmd_invest = app.add_subcommand("invest", "Optimal capacity investment");
  cmd_invest->add_option("--spec", invest.spec, "microgrid config JSON")->required();
  cmd_invest->add_option("--scenarios", invest.scenarios, "scenario JSON")->required();
  cmd_invest->add_option("--budget", invest.budget, "budget, HKD (default from config)");
  cmd_invest->add_flag("--no-demand-response", invest.no_demand_response,
                       "pin loads to the preferred curves");
  cmd_invest->add_option("--sweep-points", invest.sweep_points, "budget sweep size");
  cmd_invest->add_option("--output,-o", invest.outdir, "output directory");

  RobustArgs robust;
  auto* cmd_robust = app.add_subcommand("robust-invest", "Worst-case investment");
  cmd_robust->add_option("--spec", robust.spec, "microgrid config JSON")->required();
  cmd_robust->add_option("--scenarios", robust.scenarios, "scenario JSON")->required();
  cmd_robust->add_option("--budget", robust.budget, "budget, HKD (default from config)");
  cmd_robust->add_option("--error-pct", robust.error_pct, "prediction error, percent");
  cmd_robust->add_option("--sweep", robust.sweep, "comma-separated error percents");
  cmd_robust->add_option("--output,-o", robust.outdir, "output directory");

  ReportArgs report;
  auto* cmd_report = app.add_subcommand("report", "Run the full pipeline from a config");
  cmd_report->add_option("--config", report.config, "run config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_ingest) return run_ingest(ingest);
    if (*cmd_build) return run_build(build);
    if (*cmd_reduce) return run_reduce(reduce_args);
    if (*cmd_dispatch) return run_dispatch(dispatch);
    if (*cmd_invest) return run_invest(invest);
    if (*cmd_robust) return run_robust(robust);
    if (*cmd_report) return run_report(report);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
