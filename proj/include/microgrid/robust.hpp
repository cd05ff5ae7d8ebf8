#pragma once

#include "microgrid/portfolio.hpp"

namespace microgrid {

/// Hourly bounds on the prediction error of per-unit output, one entry
/// per scenario. Actual output is predicted + error.
struct ErrorBounds {
  Vec solar_min, solar_max;
  Vec wind_min, wind_max;
};

struct UncertaintySet {
  std::vector<ErrorBounds> bounds;  // aligned with the scenario set

  /// Symmetric bounds of +-fraction of the predicted per-unit output in
  /// every hour (the "error is P%" convention).
  static UncertaintySet relative(const ScenarioSet& scenarios, double fraction);
};

void validate(const UncertaintySet& set, const ScenarioSet& scenarios);

/// Cost-maximizing prediction errors for one scenario. The actual
/// operating cost is non-increasing in the errors, so the worst case
/// sits at the lower bounds regardless of the supply schedule.
std::pair<Vec, Vec> worst_case_errors(const UncertaintySet& set, int scenario_index);

/// Scenario with the worst-case errors applied; per-unit output clamped
/// to [0, 1] (negative actual generation is unphysical).
Scenario worst_case_scenario(const Scenario& scenario, const ErrorBounds& bounds);

/// Worst-case operating cost minimization: the inner maximization is
/// solved in closed form by worst_case_errors, after which this is a
/// central solve against the adjusted profiles.
DispatchSolution solve_rp2(const MicrogridSpec& spec, const Portfolio& portfolio,
                           const Scenario& scenario, const ErrorBounds& bounds,
                           const SolverConfig& cfg);

/// Worst-case investment problem: identical machinery to the nominal
/// investment solve with every scenario replaced by its worst case.
InvestmentSolution solve_rp1(const MicrogridSpec& spec, const ScenarioSet& scenarios,
                             const UncertaintySet& set, const InvestmentCosts& costs,
                             double budget, const SolverConfig& cfg,
                             const InvestmentOptions& options = {});

struct ErrorSweepPoint {
  double error_fraction = 0;
  InvestmentSolution solution;
};

/// Worst-case investment solves over a list of relative error widths.
std::vector<ErrorSweepPoint> sweep_errors(const MicrogridSpec& spec,
                                          const ScenarioSet& scenarios,
                                          const InvestmentCosts& costs, double budget,
                                          const std::vector<double>& fractions,
                                          const SolverConfig& cfg,
                                          const InvestmentOptions& options = {});

}  // namespace microgrid
