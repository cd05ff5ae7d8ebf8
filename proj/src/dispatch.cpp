#include "microgrid/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace microgrid {

void validate(const SolverConfig& cfg) {
  if (cfg.step_size_init < 0 || !std::isfinite(cfg.step_size_init)) {
    throw Error("solver step size must be non-negative");
  }
  if (!(cfg.tolerance > 0)) throw Error("solver tolerance must be positive");
  if (cfg.max_iterations < 1) throw Error("solver needs at least one iteration");
}

Vec price_from_supply(const Eigen::Ref<const Vec>& supply,
                      const Eigen::Ref<const Vec>& renewable_cap,
                      double operator_coeff) {
  return 2.0 * operator_coeff * (supply - renewable_cap).cwiseMax(0.0);
}

Vec price_from_supply(const Eigen::Ref<const Vec>& supply, const Portfolio& portfolio,
                      const Scenario& scenario, double operator_coeff) {
  return price_from_supply(supply, renewable_cap(portfolio, scenario), operator_coeff);
}

Vec project_box_sum(const Eigen::Ref<const Vec>& v, const Eigen::Ref<const Vec>& lo,
                    const Eigen::Ref<const Vec>& hi, double total) {
  const Eigen::Index n = v.size();
  if (lo.size() != n || hi.size() != n) throw Error("project_box_sum: size mismatch");
  if ((lo.array() > hi.array()).any()) throw Error("project_box_sum: lo exceeds hi");
  if (total < lo.sum() - 1e-9 || total > hi.sum() + 1e-9) {
    throw InfeasibleError("box_sum_total",
                          "required total " + std::to_string(total) +
                              " incompatible with bounds [" + std::to_string(lo.sum()) +
                              ", " + std::to_string(hi.sum()) + "]");
  }

  // sum(clamp(v - lambda, lo, hi)) is non-increasing in lambda; bracket the
  // root and bisect. At the bracket ends the sum equals hi.sum()/lo.sum().
  auto sum_at = [&](double lambda) {
    return (v.array() - lambda).cwiseMax(lo.array()).cwiseMin(hi.array()).sum();
  };
  double lambda_lo = (v - hi).minCoeff() - 1.0;
  double lambda_hi = (v - lo).maxCoeff() + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lambda_lo + lambda_hi);
    if (sum_at(mid) > total) {
      lambda_lo = mid;
    } else {
      lambda_hi = mid;
    }
    if (lambda_hi - lambda_lo < 1e-15 * std::max(1.0, std::abs(lambda_lo))) break;
  }
  double lambda = 0.5 * (lambda_lo + lambda_hi);
  Vec x = (v.array() - lambda).cwiseMax(lo.array()).cwiseMin(hi.array());

  // Polish the multiplier so the sum holds to 1e-9 even when bisection
  // stops on a flat stretch: spread the residual over the free entries.
  double residual = x.sum() - total;
  for (int pass = 0; pass < 8 && std::abs(residual) > 1e-10; ++pass) {
    Eigen::ArrayXd free =
        ((x.array() > lo.array() + 1e-13) && (x.array() < hi.array() - 1e-13)).cast<double>();
    const double nfree = free.sum();
    if (nfree == 0) break;
    x.array() -= (residual / nfree) * free;
    x = x.cwiseMax(lo).cwiseMin(hi);
    residual = x.sum() - total;
  }
  return x;
}

Vec user_best_response(const UserSpec& user, const Eigen::Ref<const Vec>& prices,
                       const Eigen::Ref<const Vec>& load_prev, double step) {
  const Vec gradient =
      2.0 * user.discomfort_coeff * (load_prev - user.preferred) + prices;
  return project_box_sum(load_prev - step * gradient, user.load_min, user.load_max,
                         user.total_demand);
}

namespace {

// Weight on the internal [(-Q)^+]^2 guard that keeps the aggregate supply
// non-negative; the guard vanishes on the feasible region.
double supply_guard_coeff(const MicrogridSpec& spec) { return spec.operator_coeff; }

// Feasible set for the hourly charge/discharge pair: rate boxes, the
// state-of-charge band in cumulative form, and the terminal equality.
// Projection by Dykstra's alternating scheme; the terminal hyperplane is
// processed last so the returned point satisfies it to machine precision.
class StorageSet {
 public:
  StorageSet(const StorageSpec& st, double capacity_kwh, int horizon,
             double cycle_tol = 1e-9)
      : T_(horizon),
        cap_(capacity_kwh),
        gain_c_(st.charge_eff / capacity_kwh),
        gain_d_(1.0 / (st.discharge_eff * capacity_kwh)),
        hi_c_(capacity_kwh * st.charge_rate_max),
        hi_d_(capacity_kwh * st.discharge_rate_max),
        room_up_(st.soc_max - st.soc_init),
        room_dn_(st.soc_init - st.soc_min),
        cycle_tol_(cycle_tol) {}

  void project(Vec& rc, Vec& rd) const {
    const int T = T_;
    Vec box_corr = Vec::Zero(2 * T);
    Vec lam_up = Vec::Zero(T), lam_dn = Vec::Zero(T);
    double lam_eq = 0.0;

    const double norm2_unit = gain_c_ * gain_c_ + gain_d_ * gain_d_;
    Vec soc(T);  // cumulative SOC offset, rebuilt as constraints touch z

    auto cum = [&](const Vec& c, const Vec& d) {
      double acc = 0.0;
      for (int t = 0; t < T; ++t) {
        acc += gain_c_ * c[t] - gain_d_ * d[t];
        soc[t] = acc;
      }
    };

    // Adds s * normal_t to (rc, rd): +s*gain_c on rc[0..t], -s*gain_d on rd[0..t].
    auto apply = [&](Vec& c, Vec& d, int t, double s) {
      c.head(t + 1).array() += s * gain_c_;
      d.head(t + 1).array() -= s * gain_d_;
    };

    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
      const Vec rc_before = rc, rd_before = rd;

      // Box with full-vector correction.
      {
        Vec wc = rc + box_corr.head(T);
        Vec wd = rd + box_corr.tail(T);
        rc = wc.cwiseMax(0.0).cwiseMin(hi_c_);
        rd = wd.cwiseMax(0.0).cwiseMin(hi_d_);
        box_corr.head(T) = wc - rc;
        box_corr.tail(T) = wd - rd;
      }

      // SOC halfspaces; corrections are scalars along the prefix normals.
      for (int t = 0; t < T; ++t) {
        const double norm2 = (t + 1) * norm2_unit;
        cum(rc, rd);
        // upper: soc[t] <= room_up
        double slack = soc[t] + lam_up[t] * norm2 - room_up_;
        double lam_new = slack > 0 ? slack / norm2 : 0.0;
        if (lam_up[t] != lam_new) apply(rc, rd, t, lam_up[t] - lam_new);
        lam_up[t] = lam_new;
        // lower: -soc[t] <= room_dn, normal is the negated prefix
        cum(rc, rd);
        slack = -soc[t] + lam_dn[t] * norm2 - room_dn_;
        lam_new = slack > 0 ? slack / norm2 : 0.0;
        if (lam_dn[t] != lam_new) apply(rc, rd, t, lam_new - lam_dn[t]);
        lam_dn[t] = lam_new;
      }

      // Terminal equality soc[T-1] == 0, kept last.
      {
        const double norm2 = T * norm2_unit;
        cum(rc, rd);
        const double value = soc[T - 1] + lam_eq * norm2;
        const double lam_new = value / norm2;
        if (lam_eq != lam_new) apply(rc, rd, T - 1, lam_eq - lam_new);
        lam_eq = lam_new;
      }

      const double moved = std::max((rc - rc_before).cwiseAbs().maxCoeff(),
                                    (rd - rd_before).cwiseAbs().maxCoeff());
      if (moved < cycle_tol_ * std::max(1.0, std::max(hi_c_, hi_d_))) break;
    }
  }

  double max_rate() const { return std::max(hi_c_, hi_d_); }

 private:
  // The terminal hyperplane is exact by construction (projected last);
  // the band and box residuals are bounded by the last cycle's movement,
  // so the default 1e-9 relative leaves ample headroom under the 1e-6
  // feasibility the solutions are checked against.
  static constexpr int kMaxCycles = 1500;

  int T_;
  double cap_;
  double gain_c_, gain_d_;
  double hi_c_, hi_d_;
  double room_up_, room_dn_;
  double cycle_tol_;
};

struct Point {
  Mat x;   // users x horizon (empty rows when loads are pinned)
  Vec rc;  // empty when no storage
  Vec rd;

  Point lincomb(double a, const Point& o, double b) const {
    Point r;
    r.x = a * x + b * o.x;
    if (rc.size()) {
      r.rc = a * rc + b * o.rc;
      r.rd = a * rd + b * o.rd;
    }
    return r;
  }
  double dist_inf(const Point& o) const {
    double m = 0.0;
    if (x.size()) m = (x - o.x).cwiseAbs().maxCoeff();
    if (rc.size()) {
      m = std::max(m, (rc - o.rc).cwiseAbs().maxCoeff());
      m = std::max(m, (rd - o.rd).cwiseAbs().maxCoeff());
    }
    return m;
  }
};

// Shared pieces of the period-2 solve: objective, gradient, projection.
class CentralProblem {
 public:
  CentralProblem(const MicrogridSpec& spec, const Portfolio& portfolio,
                 const Scenario& scenario, bool demand_response,
                 double projection_tol)
      : spec_(spec),
        cap_r_(renewable_cap(portfolio, scenario)),
        guard_(supply_guard_coeff(spec)),
        demand_response_(demand_response),
        has_storage_(portfolio.storage_kwh > 0.0),
        storage_(spec.storage, has_storage_ ? portfolio.storage_kwh : 1.0, spec.horizon,
                 projection_tol) {
    base_demand_ = spec.inelastic_load;
    if (!demand_response_) {
      for (const UserSpec& u : spec.users) base_demand_ += u.preferred;
    }
    double beta_max = 0.0;
    for (const UserSpec& u : spec.users) beta_max = std::max(beta_max, u.discomfort_coeff);
    const int active_users = demand_response_ ? spec.user_count() : 0;
    const int storage_cols = has_storage_ ? 2 : 0;
    lipschitz_ = 2.0 * beta_max +
                 2.0 * (spec.operator_coeff + guard_) * (active_users + storage_cols);
    if (lipschitz_ <= 0.0) lipschitz_ = 1.0;
  }

  bool has_storage() const { return has_storage_; }
  bool demand_response() const { return demand_response_; }
  double lipschitz() const { return lipschitz_; }

  Point start() const {
    Point p;
    const int T = spec_.horizon;
    if (demand_response_) {
      p.x.resize(spec_.user_count(), T);
      for (int i = 0; i < spec_.user_count(); ++i) {
        p.x.row(i) = spec_.users[i].preferred.transpose();
      }
    } else {
      p.x.resize(0, T);
    }
    if (has_storage_) {
      p.rc = Vec::Zero(T);
      p.rd = Vec::Zero(T);
    }
    return p;
  }

  Point from_warm(const DispatchSolution& warm) const {
    Point p = start();
    if (demand_response_ && warm.loads.rows() == spec_.user_count() &&
        warm.loads.cols() == spec_.horizon) {
      p.x = warm.loads;
    }
    if (has_storage_ && warm.charge.size() == spec_.horizon) {
      p.rc = warm.charge;
      p.rd = warm.discharge;
    }
    project(p);
    return p;
  }

  Vec supply_of(const Point& p) const {
    Vec q = base_demand_;
    for (Eigen::Index i = 0; i < p.x.rows(); ++i) q += p.x.row(i).transpose();
    if (p.rc.size()) q += p.rc - p.rd;
    return q;
  }

  // Working objective: true cost plus the non-negative-supply guard.
  double value(const Point& p) const {
    const Vec q = supply_of(p);
    double v = spec_.operator_coeff * (q - cap_r_).cwiseMax(0.0).squaredNorm() +
               guard_ * (-q).cwiseMax(0.0).squaredNorm();
    for (Eigen::Index i = 0; i < p.x.rows(); ++i) {
      v += discomfort_cost(p.x.row(i).transpose(), spec_.users[i]);
    }
    return v;
  }

  Point gradient(const Point& p) const {
    const Vec q = supply_of(p);
    const Vec gq = 2.0 * spec_.operator_coeff * (q - cap_r_).cwiseMax(0.0) -
                   2.0 * guard_ * (-q).cwiseMax(0.0);
    Point g;
    g.x.resize(p.x.rows(), p.x.cols());
    for (Eigen::Index i = 0; i < p.x.rows(); ++i) {
      const UserSpec& u = spec_.users[i];
      g.x.row(i) =
          (2.0 * u.discomfort_coeff * (p.x.row(i).transpose() - u.preferred) + gq)
              .transpose();
    }
    if (p.rc.size()) {
      g.rc = gq;
      g.rd = -gq;
    }
    return g;
  }

  void project(Point& p) const {
    for (Eigen::Index i = 0; i < p.x.rows(); ++i) {
      const UserSpec& u = spec_.users[i];
      p.x.row(i) = project_box_sum(p.x.row(i).transpose(), u.load_min, u.load_max,
                                   u.total_demand)
                       .transpose();
    }
    if (p.rc.size()) storage_.project(p.rc, p.rd);
  }

  Point prox_step(const Point& p, const Point& g) const {
    Point next = p.lincomb(1.0, g, -1.0 / lipschitz_);
    project(next);
    return next;
  }

  const MicrogridSpec& spec() const { return spec_; }
  const Vec& renewable() const { return cap_r_; }

 private:
  const MicrogridSpec& spec_;
  Vec cap_r_;
  Vec base_demand_;  // inelastic load, plus preferred loads when pinned
  double guard_;
  bool demand_response_;
  bool has_storage_;
  StorageSet storage_;
  double lipschitz_ = 1.0;
};

// Accelerated projected gradient with function-value restarts. Returns
// the iterate and whether the gradient-map norm met `tol`.
struct FistaOutcome {
  Point point;
  bool converged = false;
  int iterations = 0;
};

FistaOutcome fista(const CentralProblem& prob, Point v, double tol, int max_iter) {
  prob.project(v);
  double fv = prob.value(v);
  Point z = v;
  double theta = 1.0;
  FistaOutcome out;

  for (int k = 0; k < max_iter; ++k) {
    Point v_next = prob.prox_step(z, prob.gradient(z));
    double f_next = prob.value(v_next);
    if (f_next > fv) {
      // Momentum overshot: restart from the current iterate. The plain
      // step never increases the objective for a valid Lipschitz bound.
      z = v;
      theta = 1.0;
      v_next = prob.prox_step(v, prob.gradient(v));
      f_next = prob.value(v_next);
    }
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    z = v_next.lincomb(1.0 + (theta - 1.0) / theta_next, v, -(theta - 1.0) / theta_next);
    theta = theta_next;

    const double moved = v_next.dist_inf(v);
    v = v_next;
    fv = f_next;
    out.iterations = k + 1;

    // Cheap screen first; confirm with the true gradient-map norm.
    if (moved * prob.lipschitz() <= tol) {
      Point w = prob.prox_step(v, prob.gradient(v));
      const double gm = w.dist_inf(v) * prob.lipschitz();
      if (prob.value(w) < fv) {
        fv = prob.value(w);
        v = w;
        z = v;
        theta = 1.0;
      }
      if (gm <= tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.point = v;
  return out;
}

DispatchSolution assemble(const CentralProblem& prob, const MicrogridSpec& spec,
                          double storage_capacity, const Point& p, bool converged,
                          int iterations) {
  const int T = spec.horizon;
  DispatchSolution sol;
  if (prob.demand_response()) {
    sol.loads = p.x;
  } else {
    sol.loads.resize(spec.user_count(), T);
    for (int i = 0; i < spec.user_count(); ++i) {
      sol.loads.row(i) = spec.users[i].preferred.transpose();
    }
  }
  sol.charge = p.rc.size() ? p.rc : Vec::Zero(T);
  sol.discharge = p.rd.size() ? p.rd : Vec::Zero(T);

  Vec supply = prob.supply_of(p);
  // Zero out numerical dust so the merit-order split accepts the supply.
  supply = (supply.array().abs() < 1e-10).select(0.0, supply);
  sol.supply = supply;
  auto [r, q] = split_supply(sol.supply, prob.renewable());
  sol.renewable_used = std::move(r);
  sol.grid_purchase = std::move(q);
  sol.soc = soc_trajectory(sol.charge, sol.discharge,
                           p.rc.size() ? storage_capacity : 0.0, spec.storage);
  sol.prices = price_from_supply(sol.supply, prob.renewable(), spec.operator_coeff);
  sol.objective = operator_cost(sol.supply, prob.renewable(), spec.operator_coeff);
  for (int i = 0; i < spec.user_count(); ++i) {
    sol.objective += discomfort_cost(sol.loads.row(i).transpose(), spec.users[i]);
  }
  sol.converged = converged;
  sol.iterations = iterations;
  return sol;
}

}  // namespace

DispatchSolution solve_central(const MicrogridSpec& spec, const Portfolio& portfolio,
                               const Scenario& scenario, const SolverConfig& cfg,
                               const DispatchOptions& options) {
  validate(spec);
  validate(cfg);
  validate(scenario);
  if (scenario.horizon() != spec.horizon) {
    throw Error("scenario horizon " + std::to_string(scenario.horizon()) +
                " does not match spec horizon " + std::to_string(spec.horizon));
  }
  if (portfolio.solar_kw < 0 || portfolio.wind_kw < 0 || portfolio.storage_kwh < 0) {
    throw InfeasibleError("capacity_nonnegative", "capacities must be non-negative");
  }

  CentralProblem prob(spec, portfolio, scenario, options.demand_response,
                      options.projection_tol);
  Point v = options.warm_start ? prob.from_warm(*options.warm_start) : prob.start();

  FistaOutcome out;
  if (!prob.demand_response() && !prob.has_storage()) {
    out.point = std::move(v);  // nothing to optimize: loads pinned, no storage
    out.converged = true;
  } else {
    out = fista(prob, std::move(v), cfg.tolerance, cfg.max_iterations);
  }
  return assemble(prob, spec, portfolio.storage_kwh, out.point, out.converged,
                  out.iterations);
}

namespace {

// Operator-side storage re-optimization used between pricing rounds:
// minimize the grid-procurement cost of serving a fixed demand profile.
class StorageSubproblem {
 public:
  StorageSubproblem(const MicrogridSpec& spec, double capacity, const Vec& cap_r)
      : spec_(spec),
        set_(spec.storage, capacity, spec.horizon),
        cap_r_(cap_r),
        guard_(supply_guard_coeff(spec)),
        lipschitz_(4.0 * (spec.operator_coeff + guard_)) {}

  void solve(const Vec& demand, Vec& rc, Vec& rd, double tol, int max_iter) const {
    set_.project(rc, rd);
    auto value = [&](const Vec& c, const Vec& d) {
      const Vec q = demand + c - d;
      return spec_.operator_coeff * (q - cap_r_).cwiseMax(0.0).squaredNorm() +
             guard_ * (-q).cwiseMax(0.0).squaredNorm();
    };
    Vec zc = rc, zd = rd;
    double fv = value(rc, rd);
    double theta = 1.0;
    for (int k = 0; k < max_iter; ++k) {
      const Vec q = demand + zc - zd;
      const Vec gq = 2.0 * spec_.operator_coeff * (q - cap_r_).cwiseMax(0.0) -
                     2.0 * guard_ * (-q).cwiseMax(0.0);
      Vec nc = zc - gq / lipschitz_;
      Vec nd = zd + gq / lipschitz_;
      set_.project(nc, nd);
      double fn = value(nc, nd);
      if (fn > fv) {
        const Vec qv = demand + rc - rd;
        const Vec gv = 2.0 * spec_.operator_coeff * (qv - cap_r_).cwiseMax(0.0) -
                       2.0 * guard_ * (-qv).cwiseMax(0.0);
        nc = rc - gv / lipschitz_;
        nd = rd + gv / lipschitz_;
        set_.project(nc, nd);
        fn = value(nc, nd);
        theta = 1.0;
        zc = rc;
        zd = rd;
      }
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      const double mix = (theta - 1.0) / theta_next;
      const double moved = std::max((nc - rc).cwiseAbs().maxCoeff(),
                                    (nd - rd).cwiseAbs().maxCoeff());
      zc = nc + mix * (nc - rc);
      zd = nd + mix * (nd - rd);
      theta = theta_next;
      rc = nc;
      rd = nd;
      fv = fn;
      if (moved * lipschitz_ <= tol) break;
    }
  }

 private:
  const MicrogridSpec& spec_;
  StorageSet set_;
  Vec cap_r_;
  double guard_;
  double lipschitz_;
};

}  // namespace

DecentralizedResult run_decentralized(const MicrogridSpec& spec,
                                      const Portfolio& portfolio,
                                      const Scenario& scenario,
                                      const SolverConfig& cfg) {
  validate(spec);
  validate(cfg);
  validate(scenario);
  if (scenario.horizon() != spec.horizon) {
    throw Error("scenario horizon does not match spec horizon");
  }

  const int T = spec.horizon;
  const int N = spec.user_count();
  const Vec cap_r = renewable_cap(portfolio, scenario);
  const bool has_storage = portfolio.storage_kwh > 0.0;

  double beta_max = 0.0;
  for (const UserSpec& u : spec.users) beta_max = std::max(beta_max, u.discomfort_coeff);
  const double step0 = cfg.step_size_init > 0
                           ? cfg.step_size_init
                           : 1.0 / (2.0 * beta_max + 2.0 * spec.operator_coeff * N);

  Mat x(N, T);
  for (int i = 0; i < N; ++i) x.row(i) = spec.users[i].preferred.transpose();
  Vec rc = Vec::Zero(T), rd = Vec::Zero(T);
  StorageSubproblem storage(spec, has_storage ? portfolio.storage_kwh : 1.0, cap_r);
  const double inner_tol = std::max(1e-7, 0.01 * cfg.tolerance);

  auto objective_of = [&](const Mat& loads, const Vec& c, const Vec& d) {
    Vec q = spec.inelastic_load + c - d;
    for (int i = 0; i < N; ++i) q += loads.row(i).transpose();
    double obj = operator_cost(q, cap_r, spec.operator_coeff);
    for (int i = 0; i < N; ++i) {
      obj += discomfort_cost(loads.row(i).transpose(), spec.users[i]);
    }
    return obj;
  };

  DecentralizedResult result;
  Vec p_prev;
  Mat best_x = x;
  Vec best_rc = rc, best_rd = rd;
  double best_obj = std::numeric_limits<double>::infinity();
  int k = 0;
  for (; k < cfg.max_iterations; ++k) {
    Vec demand = spec.inelastic_load;
    for (int i = 0; i < N; ++i) demand += x.row(i).transpose();
    if (has_storage) storage.solve(demand, rc, rd, inner_tol, 5000);

    const Vec q = demand + rc - rd;
    const Vec p = price_from_supply(q.cwiseMax(0.0), cap_r, spec.operator_coeff);
    const double obj = objective_of(x, rc, rd);
    if (obj < best_obj) {
      best_obj = obj;
      best_x = x;
      best_rc = rc;
      best_rd = rd;
    }

    if (k >= 1) {
      const double delta = (p - p_prev).norm();
      result.trace.push_back(IterationRecord{k, delta, obj});
      if (delta <= cfg.tolerance) {
        result.converged = true;
        break;
      }
    }
    p_prev = p;

    const double step = step0 / (1.0 + k);
    for (int i = 0; i < N; ++i) {
      x.row(i) =
          user_best_response(spec.users[i], p, x.row(i).transpose(), step).transpose();
    }
  }
  result.iterations = std::min(k + 1, cfg.max_iterations);

  if (!result.converged) {
    x = best_x;
    rc = best_rc;
    rd = best_rd;
  }

  DispatchSolution sol;
  sol.loads = x;
  sol.charge = rc;
  sol.discharge = rd;
  Vec supply = spec.inelastic_load + rc - rd;
  for (int i = 0; i < N; ++i) supply += x.row(i).transpose();
  supply = (supply.array().abs() < 1e-10).select(0.0, supply);
  sol.supply = supply;
  auto [r, q_split] = split_supply(sol.supply, cap_r);
  sol.renewable_used = std::move(r);
  sol.grid_purchase = std::move(q_split);
  sol.soc = soc_trajectory(rc, rd, has_storage ? portfolio.storage_kwh : 0.0, spec.storage);
  sol.prices = price_from_supply(sol.supply, cap_r, spec.operator_coeff);
  sol.objective = objective_of(x, rc, rd);
  sol.converged = result.converged;
  sol.iterations = result.iterations;
  result.solution = std::move(sol);
  return result;
}

}  // namespace microgrid
