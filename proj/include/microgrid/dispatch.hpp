#pragma once

#include "microgrid/core.hpp"

#include <optional>

namespace microgrid {

/// First-order solver settings shared by the central and decentralized
/// paths. A zero initial step requests the default
/// 1 / (2 max_i beta_i + 2 beta_o N); the decentralized schedule is then
/// step(k) = step0 / (1 + k), which vanishes while its series diverges.
struct SolverConfig {
  double step_size_init = 0.0;
  double tolerance = 1e-5;
  int max_iterations = 50000;
};

void validate(const SolverConfig& cfg);

/// Day-ahead price implied by an aggregate supply schedule: the marginal
/// grid-procurement cost 2 beta_o (Q_t - cap_t)^+, zero wherever
/// renewables cover the supply (including exactly at the kink).
Vec price_from_supply(const Eigen::Ref<const Vec>& supply,
                      const Portfolio& portfolio, const Scenario& scenario,
                      double operator_coeff);
Vec price_from_supply(const Eigen::Ref<const Vec>& supply,
                      const Eigen::Ref<const Vec>& renewable_cap,
                      double operator_coeff);

/// Euclidean projection onto {lo <= x <= hi, sum(x) = total}, computed by
/// bisection on the multiplier of the sum constraint. The returned point
/// satisfies |sum(x) - total| <= 1e-9.
Vec project_box_sum(const Eigen::Ref<const Vec>& v, const Eigen::Ref<const Vec>& lo,
                    const Eigen::Ref<const Vec>& hi, double total);

/// One price-taking update of a user's schedule: a gradient step on
/// energy-plus-discomfort cost followed by projection onto the user's
/// feasible set.
Vec user_best_response(const UserSpec& user, const Eigen::Ref<const Vec>& prices,
                       const Eigen::Ref<const Vec>& load_prev, double step);

struct DispatchOptions {
  bool demand_response = true;   // false pins every load to its preferred curve
  const DispatchSolution* warm_start = nullptr;
  // Storage-projection residual (relative to the rate caps). The default
  // keeps emitted solutions far inside the 1e-6 feasibility checks;
  // search loops may trade slack for speed.
  double projection_tol = 1e-9;
};

/// Minimize operator cost plus total discomfort over loads and storage
/// for one scenario. Accelerated projected gradient; the solution
/// satisfies every operating constraint to 1e-6 and carries the prices
/// implied by the optimal supply.
DispatchSolution solve_central(const MicrogridSpec& spec, const Portfolio& portfolio,
                               const Scenario& scenario, const SolverConfig& cfg,
                               const DispatchOptions& options = {});

struct IterationRecord {
  int k = 0;
  double price_delta = 0;  // ||p(k) - p(k-1)||
  double objective = 0;
};

struct DecentralizedResult {
  DispatchSolution solution;
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations = 0;
};

/// Iterative day-ahead pricing: users start from their preferred curves,
/// the operator re-optimizes storage against the aggregate demand and
/// broadcasts marginal-cost prices, users take diminishing-step price
/// responses, until consecutive price vectors move less than the
/// tolerance. Only aggregates and prices cross the interface; the trace
/// carries no per-user data. If the iteration cap is hit the best
/// iterate found is returned with converged = false.
DecentralizedResult run_decentralized(const MicrogridSpec& spec,
                                      const Portfolio& portfolio,
                                      const Scenario& scenario,
                                      const SolverConfig& cfg);

}  // namespace microgrid
