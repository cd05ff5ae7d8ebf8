#pragma once

#include "microgrid/dispatch.hpp"

#include <array>
#include <optional>

namespace microgrid {

/// Capacity unit costs, HKD per kW (solar, wind) or per kWh (storage).
struct InvestmentCosts {
  double solar = 12480;
  double wind = 7800;
  double storage = 1950;
};

struct InvestmentSolution {
  Portfolio portfolio;        // chosen capacities with costs and budget
  double capital_cost = 0;
  double expected_daily_cost = 0;  // E_w[f(alpha, w)]
  double overall_cost = 0;         // capital + days * expected daily
  std::vector<DispatchSolution> dispatches;  // one per scenario, same order
  bool converged = true;
  int evaluations = 0;  // objective evaluations spent
};

struct InvestmentOptions {
  bool demand_response = true;
  int perturbation_restarts = 1;  // guards against stalls on the cost kink
  unsigned seed = 20240901;       // restart perturbation stream
  std::optional<std::array<double, 3>> initial;  // warm-start capacities (s, w, e)
};

/// Probability-weighted expected period-2 cost of a fixed portfolio:
/// sum_w pi_w f(alpha, w), each f from an independent central solve.
double expected_operating_cost(const Portfolio& portfolio, const MicrogridSpec& spec,
                               const ScenarioSet& scenarios, const SolverConfig& cfg,
                               bool demand_response = true);

/// Minimize capital cost plus expected operating cost over the investment
/// horizon, subject to the budget and non-negativity. Projected-gradient
/// outer loop on the capacities (envelope gradients for the generation
/// capacities, differenced for storage) with a compass-search polish and
/// perturbation restarts; per-scenario subproblems run in parallel.
InvestmentSolution solve_ep1(const MicrogridSpec& spec, const ScenarioSet& scenarios,
                             const InvestmentCosts& costs, double budget,
                             const SolverConfig& cfg,
                             const InvestmentOptions& options = {});

struct BudgetSweepPoint {
  double budget = 0;
  InvestmentSolution solution;
};

/// Solve the investment problem over an ascending list of budgets,
/// warm-starting each solve from the previous optimum so the overall
/// cost is non-increasing by construction.
std::vector<BudgetSweepPoint> sweep_budgets(const MicrogridSpec& spec,
                                            const ScenarioSet& scenarios,
                                            const InvestmentCosts& costs,
                                            const std::vector<double>& budgets,
                                            const SolverConfig& cfg,
                                            const InvestmentOptions& options = {});

}  // namespace microgrid
