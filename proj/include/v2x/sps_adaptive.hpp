#pragma once

#include <vector>

#include "v2x/sps.hpp"

namespace v2x {

struct SpsPpConfig {
  int rri_min_ms = 20;
  int rri_max_ms = 100;
  int delta_ms = 10;
  int reservation_span_ms = 500;
  double p_min_dbm = -110.0;
  double p_step_db = 3.0;
  double keep_fraction = 0.2;
  int sensing_window = 1000;
  /// After a threshold raise, sweep the ladder again from rri_min; when
  /// false, only rri_max is retried.
  bool restart_after_raise = true;

  ExclusionParams exclusion() const { return {p_min_dbm, p_step_db, keep_fraction}; }
  /// rri_min, rri_min + delta, ..., rri_max.
  std::vector<int> rri_ladder() const;
  /// Transmissions per reservation: the span exactly when the RRI divides it,
  /// otherwise the fewest transmissions covering it.
  int reservation_count(int rri_ms) const {
    return (reservation_span_ms + rri_ms - 1) / rri_ms;
  }
  void validate() const;
};

struct AdaptiveSelection {
  int rri_ms = 0;
  SubframeResource resource;
  int rc = 0;
  CandidateSet candidates;  ///< S_A at the winning (threshold, RRI)
  Selection selection;
};

/// Nested search: for each threshold starting at p_min, sweep the RRI ladder
/// upward with selection window [n + 1, n + rri] and stop at the first RRI
/// where at least keep_fraction of the candidates survive. When the whole
/// ladder fails, raise the threshold by p_step_db and restart from rri_min.
/// The reservation lasts reservation_count(rri) transmissions.
AdaptiveSelection adaptive_select(const SensingWindow& window, const SpsPpConfig& config,
                                  int subchannels_per_tb, Rng& rng);

/// Runs adaptive_select and installs the result; returns true if the
/// unmonitored exclusion had to be relaxed.
bool reselect_sps_pp(SchedulerState& state, const SensingWindow& window, const SpsPpConfig& config,
                     int subchannels_per_tb, Rng& rng);

/// Counter bookkeeping after one transmission; an exhausted counter always
/// forces reselection. Throws std::logic_error if the counter is already zero.
void on_transmit_pp(SchedulerState& state);

}  // namespace v2x
