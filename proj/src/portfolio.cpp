#include "microgrid/portfolio.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <thread>

namespace microgrid {

namespace {

void parallel_scenarios(int n, const std::function<void(int)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = std::max(1, std::min<int>(n, hw ? static_cast<int>(hw) : 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

using Capacities = Eigen::Vector3d;  // (solar kW, wind kW, storage kWh)

Capacities project_budget(Capacities v, const Capacities& unit_costs, double budget) {
  v = v.cwiseMax(0.0);
  if (unit_costs.dot(v) <= budget) return v;
  // alpha(lambda) = (v - lambda c)^+ spends monotonically less as lambda
  // grows; bisect the multiplier until the budget holds.
  double lo = 0.0, hi = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (unit_costs[j] > 0) hi = std::max(hi, v[j] / unit_costs[j]);
  }
  hi += 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double spend = unit_costs.dot((v - mid * unit_costs).cwiseMax(0.0).eval());
    (spend > budget ? lo : hi) = mid;
  }
  return (v - hi * unit_costs).cwiseMax(0.0);
}

// Evaluates the overall cost c . alpha + D * E_w[f(alpha, w)] with
// per-scenario solves run in parallel and warm-started from the previous
// evaluation. Tracks the best point seen together with its dispatches.
class OverallCost {
 public:
  OverallCost(const MicrogridSpec& spec, const ScenarioSet& scenarios,
              const Capacities& unit_costs, double budget, const SolverConfig& cfg,
              bool demand_response)
      : spec_(spec),
        scenarios_(scenarios),
        unit_costs_(unit_costs),
        budget_(budget),
        cfg_(cfg),
        demand_response_(demand_response),
        cache_(scenarios.size()),
        cache_valid_(scenarios.size(), false) {}

  double operator()(const Capacities& alpha) {
    const int n = scenarios_.size();
    Portfolio pf;
    pf.solar_kw = alpha[0];
    pf.wind_kw = alpha[1];
    pf.storage_kwh = alpha[2];
    pf.cost_solar = unit_costs_[0];
    pf.cost_wind = unit_costs_[1];
    pf.cost_storage = unit_costs_[2];
    pf.budget = budget_;

    std::vector<DispatchSolution> sols(n);
    parallel_scenarios(n, [&](int w) {
      DispatchOptions opt;
      opt.demand_response = demand_response_;
      opt.projection_tol = projection_tol_;
      if (cache_valid_[w]) opt.warm_start = &cache_[w];
      sols[w] = solve_central(spec_, pf, scenarios_.scenarios[w], cfg_, opt);
    });
    double expected = 0.0;
    for (int w = 0; w < n; ++w) expected += scenarios_[w].probability * sols[w].objective;
    for (int w = 0; w < n; ++w) {
      cache_[w] = sols[w];
      cache_valid_[w] = true;
    }
    const double phi = unit_costs_.dot(alpha) + spec_.days * expected;
    ++evaluations_;
    if (phi < best_phi_) {
      best_phi_ = phi;
      best_alpha_ = alpha;
      best_sols_ = std::move(sols);
      best_expected_ = expected;
    }
    return phi;
  }

  // Envelope derivative of the expected cost for the generation
  // capacities (prices are the marginal procurement costs), taken from
  // the dispatches of the most recent evaluation.
  Eigen::Vector2d generation_gradient() const {
    Eigen::Vector2d g(unit_costs_[0], unit_costs_[1]);
    for (int w = 0; w < scenarios_.size(); ++w) {
      const Scenario& sc = scenarios_.scenarios[w];
      const double pi = sc.probability;
      g[0] -= spec_.days * pi * cache_[w].prices.dot(sc.solar);
      g[1] -= spec_.days * pi * cache_[w].prices.dot(sc.wind);
    }
    return g;
  }

  int evaluations() const { return evaluations_; }
  double best_phi() const { return best_phi_; }
  const Capacities& best_alpha() const { return best_alpha_; }
  const std::vector<DispatchSolution>& best_dispatches() const { return best_sols_; }
  double best_expected() const { return best_expected_; }

  // Loose storage projections while searching; the final evaluation runs
  // at the emission-grade default so stored dispatches stay tight.
  void set_search_mode(bool on) { projection_tol_ = on ? 3e-7 : DispatchOptions{}.projection_tol; }

  // Evaluate at `alpha` and make that evaluation the stored solution,
  // regardless of earlier (looser) values.
  void refresh_best(const Capacities& alpha) {
    best_phi_ = std::numeric_limits<double>::infinity();
    (*this)(alpha);
  }

 private:
  const MicrogridSpec& spec_;
  const ScenarioSet& scenarios_;
  Capacities unit_costs_;
  double budget_;
  SolverConfig cfg_;
  bool demand_response_;

  std::vector<DispatchSolution> cache_;
  std::vector<char> cache_valid_;
  double projection_tol_ = DispatchOptions{}.projection_tol;
  int evaluations_ = 0;
  double best_phi_ = std::numeric_limits<double>::infinity();
  Capacities best_alpha_ = Capacities::Zero();
  std::vector<DispatchSolution> best_sols_;
  double best_expected_ = 0.0;
};

struct SearchScales {
  Capacities scale;
};

SearchScales make_scales(const MicrogridSpec& spec, const Capacities& unit_costs,
                         double budget) {
  // Fall back to a demand-based capacity scale when a unit cost is zero
  // or the budget does not bind.
  double peak = spec.inelastic_load.maxCoeff();
  Vec total_hi = spec.inelastic_load;
  for (const UserSpec& u : spec.users) total_hi += u.load_max;
  peak = std::max(peak, total_hi.maxCoeff());
  SearchScales s;
  for (int j = 0; j < 3; ++j) {
    double by_budget =
        unit_costs[j] > 0 ? budget / unit_costs[j] : std::numeric_limits<double>::infinity();
    s.scale[j] = std::min(by_budget, 4.0 * std::max(peak, 1.0));
    if (!(s.scale[j] > 0)) s.scale[j] = 1.0;
  }
  return s;
}

// Projected gradient descent with backtracking, then a compass-search
// polish. phi is convex in the capacities, so accepted descent steps plus
// a shrinking pattern land within the polish resolution of the optimum.
void optimize_from(OverallCost& phi, const Capacities& start, const Capacities& unit_costs,
                   double budget, const SearchScales& scales) {
  Capacities alpha = project_budget(start, unit_costs, budget);
  double value = phi(alpha);
  // progress below this is plateau noise, not worth chasing
  auto worthwhile = [](double v) { return std::max(1e-9, 1e-7 * std::abs(v)); };

  const double scale_max = scales.scale.maxCoeff();
  double trust = 0.05 * scale_max;
  const double fd_step = std::max(1e-4 * scales.scale[2], 1e-6);

  int stalls = 0;
  for (int outer = 0; outer < 40 && stalls < 2; ++outer) {
    // Storage enters the dispatch constraints, not the objective, so its
    // derivative comes from differencing; the generation coordinates use
    // the envelope formula.
    const Eigen::Vector2d g_gen = phi.generation_gradient();
    double g_e;
    {
      const double h = std::max(fd_step, 5e-3 * std::max(alpha[2], 0.05 * scales.scale[2]));
      Capacities up = alpha, dn = alpha;
      up[2] += h;
      const double f_up = phi(up);
      if (alpha[2] >= h) {
        dn[2] -= h;
        g_e = (f_up - phi(dn)) / (2.0 * h);
      } else {
        g_e = (f_up - value) / h;
      }
    }
    const Capacities g(g_gen[0], g_gen[1], g_e);
    const double gnorm = g.norm();
    if (gnorm < 1e-12) break;

    bool accepted = false;
    double step = trust / gnorm;
    for (int bt = 0; bt < 12; ++bt) {
      Capacities cand = project_budget(alpha - step * g, unit_costs, budget);
      if ((cand - alpha).cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, scale_max)) break;
      const double v = phi(cand);
      if (v < value - worthwhile(value)) {
        const double gain = value - v;
        alpha = cand;
        value = v;
        accepted = true;
        trust = std::min(trust * 1.6, 0.5 * scale_max);
        stalls = gain > 10.0 * worthwhile(value) ? 0 : stalls + 1;
        break;
      }
      step *= 0.5;
      trust *= 0.5;
    }
    if (!accepted) break;
  }

  // Compass polish at shrinking resolution, bounded evaluation budget.
  Capacities delta = 0.04 * scales.scale;
  const Capacities delta_min = 1e-3 * scales.scale;
  int evals_left = 240;
  while ((delta.array() > delta_min.array()).any() && evals_left > 0) {
    bool improved = false;
    for (int j = 0; j < 3; ++j) {
      for (double sign : {+1.0, -1.0}) {
        Capacities cand = alpha;
        cand[j] += sign * delta[j];
        cand = project_budget(cand, unit_costs, budget);
        if ((cand - alpha).cwiseAbs().maxCoeff() < 1e-14) continue;
        const double v = phi(cand);
        --evals_left;
        if (v < value - worthwhile(value)) {
          alpha = cand;
          value = v;
          improved = true;
        }
      }
    }
    if (!improved) delta *= 0.5;
  }
}

}  // namespace

double expected_operating_cost(const Portfolio& portfolio, const MicrogridSpec& spec,
                               const ScenarioSet& scenarios, const SolverConfig& cfg,
                               bool demand_response) {
  validate(scenarios);
  const int n = scenarios.size();
  std::vector<double> f(n);
  parallel_scenarios(n, [&](int w) {
    DispatchOptions opt;
    opt.demand_response = demand_response;
    f[w] = solve_central(spec, portfolio, scenarios.scenarios[w], cfg, opt).objective;
  });
  double expected = 0.0;
  for (int w = 0; w < n; ++w) expected += scenarios[w].probability * f[w];
  return expected;
}

InvestmentSolution solve_ep1(const MicrogridSpec& spec, const ScenarioSet& scenarios,
                             const InvestmentCosts& costs, double budget,
                             const SolverConfig& cfg, const InvestmentOptions& options) {
  validate(spec);
  validate(scenarios);
  validate(cfg);
  if (budget < 0) throw InfeasibleError("budget", "budget must be non-negative");

  const Capacities unit_costs(costs.solar, costs.wind, costs.storage);
  OverallCost phi(spec, scenarios, unit_costs, budget, cfg, options.demand_response);
  const SearchScales scales = make_scales(spec, unit_costs, budget);
  phi.set_search_mode(true);

  if (budget == 0.0 && unit_costs.minCoeff() > 0.0) {
    phi(Capacities::Zero());  // only feasible point
  } else {
    std::vector<Capacities> seeds;
    if (options.initial) {
      seeds.emplace_back((*options.initial)[0], (*options.initial)[1], (*options.initial)[2]);
    }
    seeds.push_back(Capacities::Zero());
    seeds.push_back(0.5 * scales.scale);

    Capacities best_seed = seeds.front();
    double best_seed_value = std::numeric_limits<double>::infinity();
    for (const Capacities& s : seeds) {
      const double v = phi(project_budget(s, unit_costs, budget));
      if (v < best_seed_value) {
        best_seed_value = v;
        best_seed = s;
      }
    }
    optimize_from(phi, best_seed, unit_costs, budget, scales);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jump(-0.25, 0.25);
    for (int r = 0; r < options.perturbation_restarts; ++r) {
      Capacities perturbed = phi.best_alpha();
      for (int j = 0; j < 3; ++j) perturbed[j] += jump(rng) * scales.scale[j];
      optimize_from(phi, perturbed, unit_costs, budget, scales);
    }
  }

  // Re-evaluate at the winner, at emission-grade projection accuracy, so
  // the stored dispatches match the reported capacities exactly.
  const Capacities alpha = phi.best_alpha();
  phi.set_search_mode(false);
  phi.refresh_best(alpha);

  InvestmentSolution sol;
  sol.portfolio.solar_kw = alpha[0];
  sol.portfolio.wind_kw = alpha[1];
  sol.portfolio.storage_kwh = alpha[2];
  sol.portfolio.cost_solar = costs.solar;
  sol.portfolio.cost_wind = costs.wind;
  sol.portfolio.cost_storage = costs.storage;
  sol.portfolio.budget = budget;
  sol.capital_cost = sol.portfolio.capital_cost();
  sol.dispatches = phi.best_dispatches();
  sol.expected_daily_cost = phi.best_expected();
  sol.overall_cost = sol.capital_cost + spec.days * sol.expected_daily_cost;
  sol.evaluations = phi.evaluations();
  sol.converged = true;
  for (const DispatchSolution& d : sol.dispatches) sol.converged &= d.converged;
  return sol;
}

std::vector<BudgetSweepPoint> sweep_budgets(const MicrogridSpec& spec,
                                            const ScenarioSet& scenarios,
                                            const InvestmentCosts& costs,
                                            const std::vector<double>& budgets,
                                            const SolverConfig& cfg,
                                            const InvestmentOptions& options) {
  std::vector<BudgetSweepPoint> sweep;
  sweep.reserve(budgets.size());
  InvestmentOptions opt = options;
  for (double b : budgets) {
    BudgetSweepPoint point;
    point.budget = b;
    point.solution = solve_ep1(spec, scenarios, costs, b, cfg, opt);
    // Seed the next (larger) budget with this optimum so the sweep is
    // non-increasing by construction.
    opt.initial = {{point.solution.portfolio.solar_kw, point.solution.portfolio.wind_kw,
                    point.solution.portfolio.storage_kwh}};
    sweep.push_back(std::move(point));
  }
  return sweep;
}

}  // namespace microgrid
