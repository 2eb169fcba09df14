#include "v2x/analytic_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace v2x::analytic {

int ClusterScenario::slots(int rri_ms) const {
  return rri_ms / subframe_duration_ms * opportunities_per_subframe;
}

void ClusterScenario::validate() const {
  if (clusters.empty()) {
    throw std::invalid_argument("analytic: at least one cluster is required");
  }
  if (std::any_of(clusters.begin(), clusters.end(), [](int c) { return c <= 0; })) {
    throw std::invalid_argument("analytic: cluster sizes must be positive");
  }
  if (opportunities_per_subframe < 1 || subframe_duration_ms < 1) {
    throw std::invalid_argument("analytic: malformed grid parameters");
  }
}

namespace {

double total_vehicles(const ClusterScenario& s) {
  return std::accumulate(s.clusters.begin(), s.clusters.end(), 0.0);
}

double cluster_occupancy(int count, int slots) { return 100.0 * count / slots; }

double cluster_success(int count, int slots) {
  return 1.0 / std::max(1.0, static_cast<double>(count) / slots);
}

void require_slots(const ClusterScenario& s, int rri_ms) {
  s.validate();
  if (s.slots(rri_ms) < 1) {
    throw std::invalid_argument("analytic: RRI yields no transmission opportunity");
  }
}

}  // namespace

double occupancy(const ClusterScenario& scenario, int rri_ms) {
  require_slots(scenario, rri_ms);
  const int slots = scenario.slots(rri_ms);
  double weighted = 0.0;
  for (int c : scenario.clusters) {
    weighted += c * cluster_occupancy(c, slots);
  }
  return weighted / total_vehicles(scenario);
}

double success_probability(const ClusterScenario& scenario, int rri_ms) {
  require_slots(scenario, rri_ms);
  const int slots = scenario.slots(rri_ms);
  double weighted = 0.0;
  for (int c : scenario.clusters) {
    weighted += c * cluster_success(c, slots);
  }
  return weighted / total_vehicles(scenario);
}

AdaptiveResult adaptive_occupancy(const ClusterScenario& scenario, int rri_min_ms, int rri_max_ms,
                                  int delta_ms) {
  require_slots(scenario, rri_min_ms);
  if (rri_max_ms < rri_min_ms || delta_ms < 1) {
    throw std::invalid_argument("analytic: malformed RRI ladder");
  }
  AdaptiveResult out;
  double occ = 0.0;
  double suc = 0.0;
  for (int c : scenario.clusters) {
    int chosen = rri_max_ms;
    for (int r = rri_min_ms; r <= rri_max_ms; r += delta_ms) {
      if (scenario.slots(r) >= c) {
        chosen = r;
        break;
      }
    }
    if (scenario.slots(chosen) < c) {
      out.saturated = true;
    }
    out.chosen_rri_ms.push_back(chosen);
    occ += c * cluster_occupancy(c, scenario.slots(chosen));
    suc += c * cluster_success(c, scenario.slots(chosen));
  }
  out.occupancy_percent = occ / total_vehicles(scenario);
  out.success_probability = suc / total_vehicles(scenario);
  return out;
}

}  // namespace v2x::analytic
