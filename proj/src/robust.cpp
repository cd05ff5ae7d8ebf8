#include "microgrid/robust.hpp"

namespace microgrid {

UncertaintySet UncertaintySet::relative(const ScenarioSet& scenarios, double fraction) {
  if (fraction < 0) throw Error("error fraction must be non-negative");
  UncertaintySet set;
  set.bounds.reserve(scenarios.size());
  for (const Scenario& sc : scenarios.scenarios) {
    ErrorBounds b;
    b.solar_min = -fraction * sc.solar;
    b.solar_max = fraction * sc.solar;
    b.wind_min = -fraction * sc.wind;
    b.wind_max = fraction * sc.wind;
    set.bounds.push_back(std::move(b));
  }
  return set;
}

void validate(const UncertaintySet& set, const ScenarioSet& scenarios) {
  if (static_cast<int>(set.bounds.size()) != scenarios.size()) {
    throw Error("uncertainty set has " + std::to_string(set.bounds.size()) +
                " entries for " + std::to_string(scenarios.size()) + " scenarios");
  }
  for (std::size_t w = 0; w < set.bounds.size(); ++w) {
    const ErrorBounds& b = set.bounds[w];
    const auto horizon = scenarios.scenarios[w].solar.size();
    if (b.solar_min.size() != horizon || b.solar_max.size() != horizon ||
        b.wind_min.size() != horizon || b.wind_max.size() != horizon) {
      throw Error("error-bound horizon mismatch in scenario " + std::to_string(w));
    }
    if ((b.solar_min.array() > b.solar_max.array()).any() ||
        (b.wind_min.array() > b.wind_max.array()).any()) {
      throw Error("error lower bound exceeds upper bound in scenario " + std::to_string(w));
    }
  }
}

std::pair<Vec, Vec> worst_case_errors(const UncertaintySet& set, int scenario_index) {
  const ErrorBounds& b = set.bounds.at(scenario_index);
  // The actual procurement cost is non-increasing in both error vectors,
  // so the inner maximization sits at the lower bounds for any supply.
  return {b.solar_min, b.wind_min};
}

Scenario worst_case_scenario(const Scenario& scenario, const ErrorBounds& bounds) {
  Scenario adjusted = scenario;
  adjusted.solar = (scenario.solar + bounds.solar_min).cwiseMax(0.0).cwiseMin(1.0);
  adjusted.wind = (scenario.wind + bounds.wind_min).cwiseMax(0.0).cwiseMin(1.0);
  return adjusted;
}

DispatchSolution solve_rp2(const MicrogridSpec& spec, const Portfolio& portfolio,
                           const Scenario& scenario, const ErrorBounds& bounds,
                           const SolverConfig& cfg) {
  return solve_central(spec, portfolio, worst_case_scenario(scenario, bounds), cfg);
}

namespace {

ScenarioSet worst_case_set(const ScenarioSet& scenarios, const UncertaintySet& set) {
  validate(set, scenarios);
  ScenarioSet adjusted;
  adjusted.scenarios.reserve(scenarios.size());
  for (int w = 0; w < scenarios.size(); ++w) {
    adjusted.scenarios.push_back(
        worst_case_scenario(scenarios.scenarios[w], set.bounds[w]));
  }
  return adjusted;
}

}  // namespace

InvestmentSolution solve_rp1(const MicrogridSpec& spec, const ScenarioSet& scenarios,
                             const UncertaintySet& set, const InvestmentCosts& costs,
                             double budget, const SolverConfig& cfg,
                             const InvestmentOptions& options) {
  return solve_ep1(spec, worst_case_set(scenarios, set), costs, budget, cfg, options);
}

std::vector<ErrorSweepPoint> sweep_errors(const MicrogridSpec& spec,
                                          const ScenarioSet& scenarios,
                                          const InvestmentCosts& costs, double budget,
                                          const std::vector<double>& fractions,
                                          const SolverConfig& cfg,
                                          const InvestmentOptions& options) {
  std::vector<ErrorSweepPoint> sweep;
  sweep.reserve(fractions.size());
  InvestmentOptions opt = options;
  for (double fraction : fractions) {
    ErrorSweepPoint point;
    point.error_fraction = fraction;
    point.solution = solve_rp1(spec, scenarios, UncertaintySet::relative(scenarios, fraction),
                               costs, budget, cfg, opt);
    opt.initial = {{point.solution.portfolio.solar_kw, point.solution.portfolio.wind_kw,
                    point.solution.portfolio.storage_kwh}};
    sweep.push_back(std::move(point));
  }
  return sweep;
}

}  // namespace microgrid
