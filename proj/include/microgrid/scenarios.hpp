#pragma once

#include "microgrid/renewables.hpp"

#include <vector>

namespace microgrid {

/// One day's joint realization of per-unit solar and wind output with a
/// realization probability. Both profiles have the same length (24 for
/// daily data; shorter horizons are allowed for reduced test problems).
struct Scenario {
  Vec solar;
  Vec wind;
  double probability = 0.0;

  int horizon() const { return static_cast<int>(solar.size()); }
};

/// Ordered scenario set. Probabilities sum to one (checked to 1e-9).
struct ScenarioSet {
  std::vector<Scenario> scenarios;

  int size() const { return static_cast<int>(scenarios.size()); }
  const Scenario& operator[](int i) const { return scenarios.at(i); }
};

void validate(const Scenario& scenario);
void validate(const ScenarioSet& set);

/// Hour-weighting of the reduction metric. The underlying references
/// leave the metric open, so the weights are configurable; defaults give
/// the plain Euclidean norm on the concatenated solar||wind day vector.
struct ScenarioMetric {
  double solar_weight = 1.0;
  double wind_weight = 1.0;
};

/// Euclidean distance between the concatenated (solar||wind) vectors of
/// two scenarios. Symmetric, zero iff the profiles are equal.
double distance(const Scenario& a, const Scenario& b,
                const ScenarioMetric& metric = {});

/// Pair solar and wind day profiles one-to-one into scenarios with
/// uniform probability 1/D. Day counts must match.
ScenarioSet build_scenarios(const std::vector<RenewableProfile>& solar_days,
                            const std::vector<RenewableProfile>& wind_days);

struct ReductionResult {
  ScenarioSet set;                // kept scenarios, original order, new probabilities
  std::vector<int> kept_indices;  // indices into the input set
  double kantorovich = 0.0;       // attained transport distance
};

/// Greedy forward selection of `keep` scenarios minimizing the
/// Kantorovich distance sum_{w not kept} pi_w min_{k kept} d(w, k) at
/// each step. Removed probability mass moves to the nearest kept
/// scenario; ties break toward the lowest index.
ReductionResult reduce_detailed(const ScenarioSet& set, int keep,
                                const ScenarioMetric& metric = {});

ScenarioSet reduce(const ScenarioSet& set, int keep,
                   const ScenarioMetric& metric = {});

/// Transport distance attained by keeping exactly `kept` (with optimal
/// reassignment of removed mass). Shared with tests as the objective
/// both greedy and exhaustive selection minimize.
double reduction_distance(const ScenarioSet& set, const std::vector<int>& kept,
                          const ScenarioMetric& metric = {});

}  // namespace microgrid
