#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "microgrid/scenarios.hpp"
#include "microgrid/core.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <random>

using namespace microgrid;

namespace {

ScenarioSet random_set(std::mt19937_64& rng, int n, int horizon = 24) {
  std::vector<RenewableProfile> solar, wind;
  for (int i = 0; i < n; ++i) {
    solar.push_back(RenewableProfile{testutil::random_vec(rng, horizon, 0.0, 1.0)});
    wind.push_back(RenewableProfile{testutil::random_vec(rng, horizon, 0.0, 1.0)});
  }
  return build_scenarios(solar, wind);
}

// Exhaustive oracle: best transport distance over all subsets of size k.
double best_subset_distance(const ScenarioSet& set, int k) {
  const int n = set.size();
  std::vector<int> pick(k);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + k, true);
  std::sort(mask.begin(), mask.end());
  do {
    std::vector<int> kept;
    for (int i = 0; i < n; ++i) {
      if (mask[i]) kept.push_back(i);
    }
    best = std::min(best, reduction_distance(set, kept));
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace

TEST_CASE("build_scenarios assigns uniform probabilities") {
  std::mt19937_64 rng(3);
  auto one = random_set(rng, 1);
  CHECK(one.size() == 1);
  CHECK(one[0].probability == doctest::Approx(1.0));

  auto four = random_set(rng, 4);
  for (const auto& s : four.scenarios) CHECK(s.probability == doctest::Approx(0.25));

  auto year = random_set(rng, 365);
  CHECK(year.size() == 365);
  for (const auto& s : year.scenarios) CHECK(s.probability == doctest::Approx(1.0 / 365.0));
  double mass = 0;
  for (const auto& s : year.scenarios) mass += s.probability;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_scenarios rejects misaligned day counts") {
  std::mt19937_64 rng(4);
  std::vector<RenewableProfile> solar{RenewableProfile{Vec::Zero(24)}};
  std::vector<RenewableProfile> wind;
  CHECK_THROWS_AS(build_scenarios(solar, wind), Error);
  wind.push_back(RenewableProfile{Vec::Zero(24)});
  wind.push_back(RenewableProfile{Vec::Zero(24)});
  CHECK_THROWS_AS(build_scenarios(solar, wind), Error);
}

TEST_CASE("scenario distance is the norm of the concatenated difference") {
  std::mt19937_64 rng(5);
  Scenario a = testutil::random_scenario(rng, 24);
  CHECK(distance(a, a) == 0.0);

  Scenario b = a;
  b.wind[7] += 1.0;
  CHECK(distance(a, b) == doctest::Approx(1.0));

  Scenario c = testutil::random_scenario(rng, 24);
  const double expect = std::sqrt((a.solar - c.solar).squaredNorm() +
                                  (a.wind - c.wind).squaredNorm());
  CHECK(distance(a, c) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(distance(a, c) == doctest::Approx(distance(c, a)));
}

TEST_CASE("metric weights rescale the distance") {
  std::mt19937_64 rng(6);
  Scenario a = testutil::random_scenario(rng, 24);
  Scenario b = testutil::random_scenario(rng, 24);
  ScenarioMetric solar_only{1.0, 0.0};
  CHECK(distance(a, b, solar_only) == doctest::Approx((a.solar - b.solar).norm()));
}

TEST_CASE("duplicate scenarios collapse without loss") {
  Scenario s;
  s.solar = Vec::Constant(24, 0.5);
  s.wind = Vec::Constant(24, 0.3);
  s.probability = 0.5;
  ScenarioSet set;
  set.scenarios = {s, s};
  auto res = reduce_detailed(set, 1);
  CHECK(res.set.size() == 1);
  CHECK(res.set[0].probability == doctest::Approx(1.0));
  CHECK(res.kantorovich == doctest::Approx(0.0));
}

TEST_CASE("keeping everything is a no-op") {
  std::mt19937_64 rng(8);
  auto set = random_set(rng, 6);
  auto res = reduce_detailed(set, 6);
  CHECK(res.kantorovich == 0.0);
  REQUIRE(res.set.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(res.set[i].probability == doctest::Approx(set[i].probability));
    CHECK(distance(res.set[i], set[i]) == 0.0);
  }
}

TEST_CASE("reduce validates the keep count") {
  std::mt19937_64 rng(9);
  auto set = random_set(rng, 4);
  CHECK_THROWS_AS(reduce(set, 0), Error);
  CHECK_THROWS_AS(reduce(set, 5), Error);
}

TEST_CASE("probability mass is conserved and moves to the nearest kept scenario") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    auto set = random_set(rng, 12, 8);
    auto res = reduce_detailed(set, 4);
    double mass = 0;
    for (const auto& s : res.set.scenarios) mass += s.probability;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& s : res.set.scenarios) CHECK(s.probability >= 0.0);
  }
}

TEST_CASE("greedy selection matches exhaustive enumeration on a 6-choose-2 instance") {
  std::mt19937_64 rng(12);
  auto set = random_set(rng, 6, 6);
  auto res = reduce_detailed(set, 2);
  CHECK(res.kantorovich == doctest::Approx(best_subset_distance(set, 2)).epsilon(1e-9));
}

TEST_CASE("greedy matches the exhaustive optimum on small random sets") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 4);  // 5..8
    const int k = 1 + static_cast<int>(rng() % 3);  // 1..3
    auto set = random_set(rng, n, 6);
    auto res = reduce_detailed(set, k);
    const double best = best_subset_distance(set, k);
    CHECK(res.kantorovich == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("reduction distance is non-increasing in keep") {
  std::mt19937_64 rng(14);
  auto set = random_set(rng, 10, 12);
  double prev = std::numeric_limits<double>::infinity();
  for (int keep = 1; keep <= 10; ++keep) {
    const double d = reduce_detailed(set, keep).kantorovich;
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
}

TEST_CASE("scenario sets are validated") {
  ScenarioSet set;
  CHECK_THROWS_AS(validate(set), Error);

  Scenario s;
  s.solar = Vec::Constant(24, 0.5);
  s.wind = Vec::Constant(24, 0.5);
  s.probability = 0.7;
  set.scenarios = {s};
  CHECK_THROWS_AS(validate(set), Error);  // mass != 1

  s.probability = 1.0;
  s.wind = Vec::Constant(24, 1.5);  // outside the unit box
  set.scenarios = {s};
  CHECK_THROWS_AS(validate(set), Error);
}
