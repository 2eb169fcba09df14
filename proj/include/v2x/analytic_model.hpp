#pragma once

#include <vector>

namespace v2x::analytic {

/// Isolated, mutually non-interfering clusters of vehicles that all hear each
/// other. `opportunities_per_subframe` is J / subchannels_per_tb.
struct ClusterScenario {
  std::vector<int> clusters;
  int opportunities_per_subframe = 1;
  int subframe_duration_ms = 1;

  int slots(int rri_ms) const;
  void validate() const;
};

/// Vehicle-weighted mean of per-cluster occupancy count / slots, in percent.
double occupancy(const ClusterScenario& scenario, int rri_ms);

/// Vehicle-weighted mean of 1 / max(1, count / slots).
double success_probability(const ClusterScenario& scenario, int rri_ms);

struct AdaptiveResult {
  double occupancy_percent = 0.0;
  double success_probability = 0.0;
  std::vector<int> chosen_rri_ms;  ///< per cluster
  bool saturated = false;          ///< some cluster exceeded rri_max capacity
};

/// Each cluster takes the smallest RRI on the ladder rri_min, rri_min + delta,
/// ..., rri_max whose slots fit its vehicles; clusters that never fit stay at
/// rri_max and the result is flagged saturated.
AdaptiveResult adaptive_occupancy(const ClusterScenario& scenario, int rri_min_ms, int rri_max_ms,
                                  int delta_ms);

}  // namespace v2x::analytic
