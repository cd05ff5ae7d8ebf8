#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "microgrid/core.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace microgrid;

namespace {

Scenario flat_scenario(int horizon, double solar, double wind) {
  Scenario sc;
  sc.solar = Vec::Constant(horizon, solar);
  sc.wind = Vec::Constant(horizon, wind);
  sc.probability = 1.0;
  return sc;
}

}  // namespace

TEST_CASE("operator cost penalizes only the grid residual, quadratically") {
  Vec cap = Vec::Constant(1, 60.0);
  Vec q = Vec::Constant(1, 100.0);
  CHECK(operator_cost(q, cap, 0.005) == doctest::Approx(8.0));  // 0.005 * 40^2

  // fully covered supply costs nothing
  Vec q2 = Vec::Constant(5, 50.0);
  Vec cap2 = Vec::Constant(5, 80.0);
  CHECK(operator_cost(q2, cap2, 0.005) == 0.0);

  // no investment: cost is beta_o * sum b^2 when supply equals the base load
  std::mt19937_64 rng(1);
  Vec b = testutil::random_vec(rng, 24, 0.0, 30.0);
  double expect = 0.0;
  for (int t = 0; t < 24; ++t) expect += 0.005 * b[t] * b[t];
  CHECK(operator_cost(b, Vec::Zero(24), 0.005) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("operator cost via portfolio and scenario") {
  MicrogridSpec spec;
  spec.horizon = 2;
  spec.inelastic_load = Vec::Zero(2);
  spec.operator_coeff = 0.005;
  Portfolio pf;
  pf.solar_kw = 100.0;
  pf.wind_kw = 50.0;
  pf.budget = 1e9;
  Scenario sc = flat_scenario(2, 0.4, 0.4);  // cap = 0.4*100 + 0.4*50 = 60
  Vec q = Vec::Constant(2, 100.0);
  CHECK(operator_cost(q, pf, sc, spec) == doctest::Approx(2 * 8.0));
}

TEST_CASE("discomfort cost is the scaled squared deviation") {
  UserSpec u;
  u.preferred = Vec::Constant(4, 5.0);
  u.discomfort_coeff = 0.5;
  CHECK(discomfort_cost(u.preferred, u) == 0.0);

  Vec x = u.preferred;
  x[2] += 2.0;
  CHECK(discomfort_cost(x, u) == doctest::Approx(2.0));  // 0.5 * 2^2

  // quadratic homogeneity: doubling every deviation quadruples the cost
  Vec x2 = u.preferred + 2.0 * (x - u.preferred);
  CHECK(discomfort_cost(x2, u) == doctest::Approx(4.0 * discomfort_cost(x, u)));
}

TEST_CASE("split_supply follows the merit order") {
  Vec cap(3), q(3);
  cap << 80, 60, 10;
  q << 50, 100, 0;
  auto [r, g] = split_supply(q, cap);
  CHECK(r[0] == 50.0);
  CHECK(g[0] == 0.0);
  CHECK(r[1] == 60.0);
  CHECK(g[1] == 40.0);
  CHECK(r[2] == 0.0);
  CHECK(g[2] == 0.0);

  CHECK_THROWS_AS(split_supply(Vec::Constant(1, -1.0), Vec::Zero(1)), Error);
  CHECK_NOTHROW(split_supply(Vec::Constant(1, -1e-10), Vec::Zero(1)));
}

TEST_CASE("split_supply invariants on random input") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 25; ++rep) {
    Vec q = testutil::random_vec(rng, 24, 0.0, 100.0);
    Vec cap = testutil::random_vec(rng, 24, 0.0, 100.0);
    auto [r, g] = split_supply(q, cap);
    CHECK((r + g - q).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.minCoeff() >= 0.0);
    CHECK((r - cap).maxCoeff() <= 1e-12);
    CHECK(g.minCoeff() >= 0.0);
  }
}

TEST_CASE("soc trajectory integrates charge and discharge with losses") {
  StorageSpec st;
  st.charge_eff = 0.9;
  st.discharge_eff = 0.9;
  st.soc_init = 0.5;
  st.soc_min = 0.0;
  st.soc_max = 1.0;

  Vec zero = Vec::Zero(4);
  Vec soc = soc_trajectory(zero, zero, 100.0, st);
  CHECK((soc.array() == 0.5).all());

  Vec rc = Vec::Zero(4);
  rc[0] = 10.0;
  soc = soc_trajectory(rc, zero, 100.0, st);
  CHECK(soc[0] == doctest::Approx(0.59));  // 0.5 + 0.9*10/100
  CHECK(soc[3] == doctest::Approx(0.59));

  // lossless round trip returns to the initial level
  StorageSpec ideal = st;
  ideal.charge_eff = 1.0;
  ideal.discharge_eff = 1.0;
  Vec rd = Vec::Zero(4);
  rd[2] = 10.0;
  soc = soc_trajectory(rc, rd, 100.0, ideal);
  CHECK(soc[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero-capacity storage only admits the idle schedule") {
  StorageSpec st;
  Vec zero = Vec::Zero(3);
  Vec soc = soc_trajectory(zero, zero, 0.0, st);
  CHECK((soc.array() == st.soc_init).all());

  Vec rc = zero;
  rc[1] = 1.0;
  CHECK_THROWS_AS(soc_trajectory(rc, zero, 0.0, st), Error);
}

TEST_CASE("soc trajectory is linear in the schedules") {
  std::mt19937_64 rng(3);
  StorageSpec st = testutil::random_storage(rng);
  const double cap = 50.0;
  Vec rc1 = testutil::random_vec(rng, 6, 0.0, 5.0), rd1 = testutil::random_vec(rng, 6, 0.0, 5.0);
  Vec rc2 = testutil::random_vec(rng, 6, 0.0, 5.0), rd2 = testutil::random_vec(rng, 6, 0.0, 5.0);
  Vec base = Vec::Constant(6, st.soc_init);
  Vec lhs = soc_trajectory(0.3 * rc1 + 0.7 * rc2, 0.3 * rd1 + 0.7 * rd2, cap, st) - base;
  Vec rhs = 0.3 * (soc_trajectory(rc1, rd1, cap, st) - base) +
            0.7 * (soc_trajectory(rc2, rd2, cap, st) - base);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cost primitives are convex along random segments") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  UserSpec u;
  u.preferred = testutil::random_vec(rng, 24, 2.0, 8.0);
  u.discomfort_coeff = 0.5;
  Vec cap = testutil::random_vec(rng, 24, 0.0, 60.0);
  for (int rep = 0; rep < 30; ++rep) {
    Vec v = testutil::random_vec(rng, 24, 0.0, 100.0);
    Vec w = testutil::random_vec(rng, 24, 0.0, 100.0);
    const double l = lam(rng);
    Vec mid = l * v + (1.0 - l) * w;
    CHECK(operator_cost(mid, cap, 0.005) <=
          l * operator_cost(v, cap, 0.005) + (1.0 - l) * operator_cost(w, cap, 0.005) + 1e-9);
    CHECK(discomfort_cost(mid, u) <=
          l * discomfort_cost(v, u) + (1.0 - l) * discomfort_cost(w, u) + 1e-9);
  }
}

TEST_CASE("operator-cost subgradient matches central finite differences away from kinks") {
  std::mt19937_64 rng(5);
  Vec cap = testutil::random_vec(rng, 24, 20.0, 60.0);
  Vec q = testutil::random_vec(rng, 24, 0.0, 100.0);
  // keep every hour at least 0.5 kW away from its kink
  for (int t = 0; t < 24; ++t) {
    if (std::abs(q[t] - cap[t]) < 0.5) q[t] = cap[t] + 0.7;
  }
  const double h = 1e-6;
  for (int t = 0; t < 24; ++t) {
    Vec up = q, dn = q;
    up[t] += h;
    dn[t] -= h;
    const double fd =
        (operator_cost(up, cap, 0.005) - operator_cost(dn, cap, 0.005)) / (2.0 * h);
    const double analytic = 2.0 * 0.005 * std::max(0.0, q[t] - cap[t]);
    CHECK(std::abs(fd - analytic) < 1e-5);
  }
}

TEST_CASE("spec validation names the violated constraint") {
  std::mt19937_64 rng(6);
  MicrogridSpec spec = testutil::random_spec(rng, 2, 6);
  CHECK_NOTHROW(validate(spec));

  MicrogridSpec bad = spec;
  bad.users[1].total_demand = bad.users[1].load_max.sum() + 1.0;
  try {
    validate(bad);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.constraint() == "total_demand_range");
    CHECK(std::string(e.what()).find("user 1") != std::string::npos);
  }

  bad = spec;
  bad.users[0].load_min[2] = bad.users[0].load_max[2] + 1.0;
  CHECK_THROWS_AS(validate(bad), InfeasibleError);

  bad = spec;
  bad.storage.soc_init = bad.storage.soc_max + 0.1;
  CHECK_THROWS_AS(validate(bad), InfeasibleError);

  bad = spec;
  bad.inelastic_load[0] = -1.0;
  CHECK_THROWS_AS(validate(bad), InfeasibleError);
}

TEST_CASE("portfolio validation enforces the budget and sign constraints") {
  Portfolio pf;
  pf.solar_kw = 10.0;
  pf.budget = pf.capital_cost();
  CHECK_NOTHROW(validate(pf));
  pf.budget = pf.capital_cost() - 1.0;
  CHECK_THROWS_AS(validate(pf), InfeasibleError);
  pf.budget = 1e9;
  pf.wind_kw = -1.0;
  CHECK_THROWS_AS(validate(pf), InfeasibleError);
}
