#pragma once

#include "microgrid/scenarios.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace microgrid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model whose constraint set is empty (or a solve that was handed
/// one). `constraint()` names the violated constraint.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string constraint, const std::string& detail)
      : Error(constraint + ": " + detail), constraint_(std::move(constraint)) {}

  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

/// One user's elastic-load model: hourly box bounds, a total energy
/// requirement over the horizon, the preferred consumption under flat
/// prices, and the quadratic discomfort coefficient.
struct UserSpec {
  Vec load_min;             // kW per hour
  Vec load_max;             // kW per hour
  Vec preferred;            // kW per hour
  double total_demand = 0;  // kWh over the horizon
  double discomfort_coeff = 0.5;
};

/// Battery physics per unit of invested capacity. Rates are kW per kWh
/// of capacity; state of charge is a fraction of capacity.
struct StorageSpec {
  double charge_rate_max = 0.25;
  double discharge_rate_max = 0.25;
  double charge_eff = 0.95;
  double discharge_eff = 0.95;
  double soc_min = 0.3;  // = 1 - max depth of discharge
  double soc_max = 0.95;
  double soc_init = 0.5;
};

/// Static description of the microgrid: users, inelastic load, operator
/// cost coefficient, horizon, investment-horizon day count, storage physics.
struct MicrogridSpec {
  std::vector<UserSpec> users;
  Vec inelastic_load;        // kW per hour
  double operator_coeff = 0.005;
  int horizon = 24;
  int days = 3650;
  StorageSpec storage;

  int user_count() const { return static_cast<int>(users.size()); }
};

/// Invested capacities with their unit costs and the capital budget.
struct Portfolio {
  double solar_kw = 0;
  double wind_kw = 0;
  double storage_kwh = 0;
  double cost_solar = 12480;    // HKD per kW
  double cost_wind = 7800;      // HKD per kW
  double cost_storage = 1950;   // HKD per kWh
  double budget = 0;            // HKD

  double capital_cost() const {
    return cost_solar * solar_kw + cost_wind * wind_kw + cost_storage * storage_kwh;
  }
};

void validate(const UserSpec& user, int horizon);
void validate(const StorageSpec& storage);
void validate(const MicrogridSpec& spec);
void validate(const Portfolio& portfolio);

/// Hourly renewable generation ceiling for the invested capacities:
/// eta_s * alpha_s + eta_w * alpha_w.
Vec renewable_cap(const Portfolio& portfolio, const Scenario& scenario);

/// Quadratic grid-procurement cost of serving aggregate supply Q:
/// beta_o * sum_t [(Q_t - renewable_cap_t)^+]^2.
double operator_cost(const Eigen::Ref<const Vec>& supply, const Portfolio& portfolio,
                     const Scenario& scenario, const MicrogridSpec& spec);
double operator_cost(const Eigen::Ref<const Vec>& supply,
                     const Eigen::Ref<const Vec>& renewable_cap, double operator_coeff);

/// Quadratic deviation penalty beta_i * ||x - preferred||^2.
double discomfort_cost(const Eigen::Ref<const Vec>& load, const UserSpec& user);

/// Merit-order split of aggregate supply into renewable use and grid
/// purchase: r = min(Q, cap), q = (Q - cap)^+. Rejects negative supply
/// (tiny numerical dust below 1e-9 is treated as zero).
std::pair<Vec, Vec> split_supply(const Eigen::Ref<const Vec>& supply,
                                 const Eigen::Ref<const Vec>& renewable_cap);

/// State-of-charge trajectory from hourly charge/discharge schedules:
/// soc_t = soc_{t-1} + eta_c * rc_t / cap - rd_t / (eta_d * cap).
/// With zero capacity the schedules must be identically zero and the
/// trajectory is constant at soc_init.
Vec soc_trajectory(const Eigen::Ref<const Vec>& charge,
                   const Eigen::Ref<const Vec>& discharge, double capacity_kwh,
                   const StorageSpec& storage);

/// Full per-scenario operating schedule with day-ahead prices.
struct DispatchSolution {
  Mat loads;          // users x horizon, elastic consumption x_i
  Vec supply;         // aggregate supply Q
  Vec renewable_used; // r
  Vec grid_purchase;  // q
  Vec charge;         // r_c
  Vec discharge;      // r_d
  Vec soc;            // state of charge after each hour
  Vec prices;         // HKD per kWh
  double objective = 0;
  bool converged = true;
  int iterations = 0;
};

/// Re-validate a dispatch solution against every operating constraint
/// (load boxes and totals, storage boxes, SOC band and dynamics, terminal
/// SOC, power balance, supply split) at tolerance `tol`. Returns a list
/// of human-readable violations; empty means the solution checks out.
std::vector<std::string> check_dispatch(const DispatchSolution& sol,
                                        const MicrogridSpec& spec,
                                        const Portfolio& portfolio,
                                        const Scenario& scenario, double tol = 1e-6);

}  // namespace microgrid
