#include "microgrid/core.hpp"

#include <cmath>
#include <sstream>

namespace microgrid {

namespace {

bool finite_all(const Vec& v) { return v.allFinite(); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void validate(const UserSpec& user, int horizon) {
  const auto n = static_cast<Eigen::Index>(horizon);
  if (user.load_min.size() != n || user.load_max.size() != n ||
      user.preferred.size() != n) {
    throw InfeasibleError("user_horizon", "bound and preference vectors must have length " +
                                              std::to_string(horizon));
  }
  if (!finite_all(user.load_min) || !finite_all(user.load_max) ||
      !finite_all(user.preferred) || !std::isfinite(user.total_demand)) {
    throw InfeasibleError("user_finite", "user parameters must be finite");
  }
  if ((user.load_min.array() < 0).any()) {
    throw InfeasibleError("load_lower_bound", "hourly lower bounds must be non-negative");
  }
  if ((user.load_min.array() > user.load_max.array()).any()) {
    throw InfeasibleError("load_bounds_order",
                          "an hourly lower bound exceeds the matching upper bound");
  }
  if (user.total_demand < user.load_min.sum() - 1e-12 ||
      user.total_demand > user.load_max.sum() + 1e-12) {
    throw InfeasibleError("total_demand_range",
                          "total elastic demand " + fmt(user.total_demand) +
                              " outside [" + fmt(user.load_min.sum()) + ", " +
                              fmt(user.load_max.sum()) + "] spanned by the bounds");
  }
  if ((user.preferred.array() < user.load_min.array() - 1e-9).any() ||
      (user.preferred.array() > user.load_max.array() + 1e-9).any()) {
    throw InfeasibleError("preferred_in_bounds",
                          "preferred consumption leaves the hourly bounds");
  }
  if (!(user.discomfort_coeff > 0)) {
    throw InfeasibleError("discomfort_coeff", "discomfort coefficient must be positive");
  }
}

void validate(const StorageSpec& storage) {
  if (!(storage.charge_rate_max > 0) || !(storage.discharge_rate_max > 0)) {
    throw InfeasibleError("storage_rates", "per-unit charge/discharge caps must be positive");
  }
  if (!(storage.charge_eff > 0 && storage.charge_eff <= 1.0) ||
      !(storage.discharge_eff > 0 && storage.discharge_eff <= 1.0)) {
    throw InfeasibleError("storage_efficiency", "efficiencies must lie in (0, 1]");
  }
  if (!(0.0 <= storage.soc_min && storage.soc_min <= storage.soc_init &&
        storage.soc_init <= storage.soc_max && storage.soc_max <= 1.0)) {
    throw InfeasibleError("soc_band", "need 0 <= soc_min <= soc_init <= soc_max <= 1");
  }
}

void validate(const MicrogridSpec& spec) {
  if (spec.horizon < 1) throw InfeasibleError("horizon", "horizon must be at least 1");
  if (spec.days < 1) throw InfeasibleError("days", "day count must be at least 1");
  if (!(spec.operator_coeff > 0)) {
    throw InfeasibleError("operator_coeff", "operator cost coefficient must be positive");
  }
  if (spec.inelastic_load.size() != spec.horizon) {
    throw InfeasibleError("inelastic_load", "inelastic load must have one entry per hour");
  }
  if (!finite_all(spec.inelastic_load) || (spec.inelastic_load.array() < 0).any()) {
    throw InfeasibleError("inelastic_load", "inelastic load must be finite and non-negative");
  }
  for (std::size_t i = 0; i < spec.users.size(); ++i) {
    try {
      validate(spec.users[i], spec.horizon);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError(e.constraint(), "user " + std::to_string(i) + ": " + e.what());
    }
  }
  validate(spec.storage);
}

void validate(const Portfolio& portfolio) {
  if (portfolio.solar_kw < 0 || portfolio.wind_kw < 0 || portfolio.storage_kwh < 0) {
    throw InfeasibleError("capacity_nonnegative", "capacities must be non-negative");
  }
  if (portfolio.cost_solar < 0 || portfolio.cost_wind < 0 || portfolio.cost_storage < 0) {
    throw InfeasibleError("unit_costs", "unit costs must be non-negative");
  }
  if (portfolio.capital_cost() > portfolio.budget + 1e-6) {
    throw InfeasibleError("budget", "capital cost " + fmt(portfolio.capital_cost()) +
                                        " exceeds budget " + fmt(portfolio.budget));
  }
}

Vec renewable_cap(const Portfolio& portfolio, const Scenario& scenario) {
  return scenario.solar * portfolio.solar_kw + scenario.wind * portfolio.wind_kw;
}

double operator_cost(const Eigen::Ref<const Vec>& supply,
                     const Eigen::Ref<const Vec>& renewable_cap, double operator_coeff) {
  return operator_coeff * (supply - renewable_cap).cwiseMax(0.0).squaredNorm();
}

double operator_cost(const Eigen::Ref<const Vec>& supply, const Portfolio& portfolio,
                     const Scenario& scenario, const MicrogridSpec& spec) {
  return operator_cost(supply, renewable_cap(portfolio, scenario), spec.operator_coeff);
}

double discomfort_cost(const Eigen::Ref<const Vec>& load, const UserSpec& user) {
  return user.discomfort_coeff * (load - user.preferred).squaredNorm();
}

std::pair<Vec, Vec> split_supply(const Eigen::Ref<const Vec>& supply,
                                 const Eigen::Ref<const Vec>& renewable_cap) {
  if ((supply.array() < -1e-9).any()) {
    throw Error("split_supply: negative aggregate supply");
  }
  Vec q = supply.cwiseMax(0.0);
  Vec r = q.cwiseMin(renewable_cap);
  q -= r;
  return {std::move(r), std::move(q)};
}

Vec soc_trajectory(const Eigen::Ref<const Vec>& charge,
                   const Eigen::Ref<const Vec>& discharge, double capacity_kwh,
                   const StorageSpec& storage) {
  if (charge.size() != discharge.size()) {
    throw Error("soc_trajectory: charge/discharge length mismatch");
  }
  if (capacity_kwh <= 0.0) {
    if (charge.cwiseAbs().maxCoeff() > 0.0 || discharge.cwiseAbs().maxCoeff() > 0.0) {
      throw Error("soc_trajectory: nonzero schedule with zero storage capacity");
    }
    return Vec::Constant(charge.size(), storage.soc_init);
  }
  Vec soc(charge.size());
  double level = storage.soc_init;
  for (Eigen::Index t = 0; t < charge.size(); ++t) {
    level += storage.charge_eff * charge[t] / capacity_kwh -
             discharge[t] / (storage.discharge_eff * capacity_kwh);
    soc[t] = level;
  }
  return soc;
}

std::vector<std::string> check_dispatch(const DispatchSolution& sol,
                                        const MicrogridSpec& spec,
                                        const Portfolio& portfolio,
                                        const Scenario& scenario, double tol) {
  std::vector<std::string> bad;
  auto complain = [&bad](const std::string& what, double err) {
    bad.push_back(what + " violated by " + fmt(err));
  };

  const int T = spec.horizon;
  const int N = spec.user_count();
  if (sol.loads.rows() != N || sol.loads.cols() != T || sol.supply.size() != T ||
      sol.charge.size() != T || sol.discharge.size() != T || sol.soc.size() != T ||
      sol.prices.size() != T) {
    bad.push_back("solution dimensions do not match the spec");
    return bad;
  }

  for (int i = 0; i < N; ++i) {
    const UserSpec& u = spec.users[i];
    const Vec x = sol.loads.row(i).transpose();
    double box = std::max((u.load_min - x).maxCoeff(), (x - u.load_max).maxCoeff());
    if (box > tol) complain("hourly load bounds (user " + std::to_string(i) + ")", box);
    double total = std::abs(x.sum() - u.total_demand);
    if (total > tol) complain("total elastic demand (user " + std::to_string(i) + ")", total);
  }

  const double cap = portfolio.storage_kwh;
  const StorageSpec& st = spec.storage;
  double box_c = std::max(-sol.charge.minCoeff(),
                          sol.charge.maxCoeff() - cap * st.charge_rate_max);
  if (box_c > tol) complain("charge-rate bounds", box_c);
  double box_d = std::max(-sol.discharge.minCoeff(),
                          sol.discharge.maxCoeff() - cap * st.discharge_rate_max);
  if (box_d > tol) complain("discharge-rate bounds", box_d);

  Vec soc;
  try {
    soc = soc_trajectory(sol.charge, sol.discharge, cap, st);
  } catch (const Error& e) {
    bad.emplace_back(e.what());
    return bad;
  }
  double dyn = (soc - sol.soc).cwiseAbs().maxCoeff();
  if (dyn > tol) complain("state-of-charge dynamics", dyn);
  double band = std::max((Vec::Constant(T, st.soc_min) - soc).maxCoeff(),
                         (soc - Vec::Constant(T, st.soc_max)).maxCoeff());
  if (band > tol) complain("state-of-charge band", band);
  double terminal = std::abs(soc[T - 1] - st.soc_init);
  if (terminal > 1e-9) complain("terminal state of charge", terminal);

  Vec demand = spec.inelastic_load + sol.charge - sol.discharge;
  for (int i = 0; i < N; ++i) demand += sol.loads.row(i).transpose();
  double balance = (sol.supply - demand).cwiseAbs().maxCoeff();
  if (balance > tol) complain("power balance", balance);

  const Vec cap_r = renewable_cap(portfolio, scenario);
  if (sol.renewable_used.size() == T && sol.grid_purchase.size() == T) {
    double split = (sol.renewable_used + sol.grid_purchase - sol.supply).cwiseAbs().maxCoeff();
    if (split > tol) complain("supply split", split);
    double rb = std::max(-sol.renewable_used.minCoeff(),
                         (sol.renewable_used - cap_r).maxCoeff());
    if (rb > tol) complain("renewable supply bounds", rb);
    if (-sol.grid_purchase.minCoeff() > tol) {
      complain("grid purchase non-negativity", -sol.grid_purchase.minCoeff());
    }
  } else {
    bad.push_back("supply split vectors missing");
  }
  if (sol.supply.minCoeff() < -tol) complain("supply non-negativity", -sol.supply.minCoeff());

  return bad;
}

}  // namespace microgrid
