#include "microgrid/scenarios.hpp"

#include "microgrid/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace microgrid {

void validate(const Scenario& scenario) {
  if (scenario.solar.size() == 0 || scenario.solar.size() != scenario.wind.size()) {
    throw Error("scenario profiles must be nonempty and equally long");
  }
  if (!(scenario.probability >= 0.0)) {
    throw Error("scenario probability must be non-negative");
  }
  auto in_unit = [](const Vec& v) {
    return (v.array() >= -1e-12).all() && (v.array() <= 1.0 + 1e-12).all();
  };
  if (!in_unit(scenario.solar) || !in_unit(scenario.wind)) {
    throw Error("per-unit output outside [0, 1]");
  }
}

void validate(const ScenarioSet& set) {
  if (set.scenarios.empty()) throw Error("scenario set is empty");
  double mass = 0.0;
  const int horizon = set.scenarios.front().horizon();
  for (const Scenario& s : set.scenarios) {
    validate(s);
    if (s.horizon() != horizon) throw Error("scenario horizons differ within one set");
    mass += s.probability;
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw Error("scenario probabilities sum to " + std::to_string(mass) + ", not 1");
  }
}

double distance(const Scenario& a, const Scenario& b, const ScenarioMetric& metric) {
  const double ds = (a.solar - b.solar).squaredNorm();
  const double dw = (a.wind - b.wind).squaredNorm();
  return std::sqrt(metric.solar_weight * ds + metric.wind_weight * dw);
}

ScenarioSet build_scenarios(const std::vector<RenewableProfile>& solar_days,
                            const std::vector<RenewableProfile>& wind_days) {
  if (solar_days.empty() || solar_days.size() != wind_days.size()) {
    throw Error("misaligned day counts: " + std::to_string(solar_days.size()) +
                " solar vs " + std::to_string(wind_days.size()) + " wind days");
  }
  const double pi = 1.0 / static_cast<double>(solar_days.size());
  ScenarioSet set;
  set.scenarios.reserve(solar_days.size());
  for (std::size_t d = 0; d < solar_days.size(); ++d) {
    set.scenarios.push_back(Scenario{solar_days[d].hours, wind_days[d].hours, pi});
  }
  validate(set);
  return set;
}

double reduction_distance(const ScenarioSet& set, const std::vector<int>& kept,
                          const ScenarioMetric& metric) {
  std::vector<bool> is_kept(set.size(), false);
  for (int k : kept) is_kept.at(k) = true;
  double total = 0.0;
  for (int w = 0; w < set.size(); ++w) {
    if (is_kept[w]) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (int k : kept) nearest = std::min(nearest, distance(set[w], set[k], metric));
    total += set[w].probability * nearest;
  }
  return total;
}

ReductionResult reduce_detailed(const ScenarioSet& set, int keep,
                                const ScenarioMetric& metric) {
  validate(set);
  const int n = set.size();
  if (keep < 1 || keep > n) {
    throw Error("keep must be in [1, " + std::to_string(n) + "], got " +
                std::to_string(keep));
  }

  Mat dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = distance(set[i], set[j], metric);
    }
  }

  // Greedy forward selection: each step adds the scenario whose
  // inclusion yields the smallest remaining transport distance. Ties go
  // to the lowest index.
  std::vector<bool> selected(n, false);
  Vec nearest = Vec::Constant(n, std::numeric_limits<double>::infinity());
  std::vector<int> kept;
  kept.reserve(keep);
  for (int step = 0; step < keep; ++step) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int cand = 0; cand < n; ++cand) {
      if (selected[cand]) continue;
      double cost = 0.0;
      for (int w = 0; w < n; ++w) {
        if (selected[w] || w == cand) continue;
        cost += set[w].probability * std::min(nearest[w], dist(w, cand));
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = cand;
      }
    }
    selected[best] = true;
    kept.push_back(best);
    for (int w = 0; w < n; ++w) nearest[w] = std::min(nearest[w], dist(w, best));
  }
  std::sort(kept.begin(), kept.end());

  // Exchange polish: greedy alone can miss the best subset, so accept the
  // best improving exchange of one (and, within an effort budget, two)
  // kept scenarios while one exists. Deterministic; ties keep the incumbent.
  if (keep < n) {
    auto subset_distance = [&](const std::vector<int>& subset) {
      double total = 0.0;
      for (int w = 0; w < n; ++w) {
        if (std::find(subset.begin(), subset.end(), w) != subset.end()) continue;
        double nearest_d = std::numeric_limits<double>::infinity();
        for (int s : subset) nearest_d = std::min(nearest_d, dist(w, s));
        total += set[w].probability * nearest_d;
      }
      return total;
    };
    const int removed = n - keep;
    const long pair_candidates = static_cast<long>(keep) * (keep - 1) / 2 *
                                 (static_cast<long>(removed) * (removed - 1) / 2);
    const bool pair_swaps = keep >= 2 && pair_candidates > 0 && pair_candidates <= 200000;

    double current = subset_distance(kept);
    bool improved = true;
    while (improved) {
      improved = false;
      std::vector<int> out;
      for (int u = 0; u < n; ++u) {
        if (!std::binary_search(kept.begin(), kept.end(), u)) out.push_back(u);
      }
      std::vector<int> best_swap = kept;
      double best_value = current;
      auto consider = [&](std::vector<int> cand) {
        std::sort(cand.begin(), cand.end());
        const double value = subset_distance(cand);
        if (value < best_value - 1e-15) {
          best_value = value;
          best_swap = std::move(cand);
        }
      };
      for (std::size_t a = 0; a < kept.size(); ++a) {
        for (int u : out) {
          std::vector<int> cand = kept;
          cand[a] = u;
          consider(std::move(cand));
        }
      }
      if (pair_swaps) {
        for (std::size_t a = 0; a < kept.size(); ++a) {
          for (std::size_t b = a + 1; b < kept.size(); ++b) {
            for (std::size_t u = 0; u < out.size(); ++u) {
              for (std::size_t v = u + 1; v < out.size(); ++v) {
                std::vector<int> cand = kept;
                cand[a] = out[u];
                cand[b] = out[v];
                consider(std::move(cand));
              }
            }
          }
        }
      }
      if (best_value < current - 1e-15) {
        kept = best_swap;
        std::sort(kept.begin(), kept.end());
        current = best_value;
        improved = true;
      }
    }
    std::fill(selected.begin(), selected.end(), false);
    for (int s : kept) selected[s] = true;
  }

  // Removed mass moves to the nearest kept scenario (lowest index on ties).
  std::vector<double> pi(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) pi[k] = set[kept[k]].probability;
  for (int w = 0; w < n; ++w) {
    if (selected[w]) continue;
    std::size_t target = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (dist(w, kept[k]) < best_d) {
        best_d = dist(w, kept[k]);
        target = k;
      }
    }
    pi[target] += set[w].probability;
  }

  ReductionResult result;
  result.kept_indices = kept;
  result.kantorovich = reduction_distance(set, kept, metric);
  result.set.scenarios.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    Scenario s = set[kept[k]];
    s.probability = pi[k];
    result.set.scenarios.push_back(std::move(s));
  }
  validate(result.set);
  return result;
}

ScenarioSet reduce(const ScenarioSet& set, int keep, const ScenarioMetric& metric) {
  return reduce_detailed(set, keep, metric).set;
}

}  // namespace microgrid
