#include "v2x/sps_adaptive.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace v2x {

std::vector<int> SpsPpConfig::rri_ladder() const {
  std::vector<int> ladder;
  for (int r = rri_min_ms; r <= rri_max_ms; r += delta_ms) {
    ladder.push_back(r);
  }
  return ladder;
}

void SpsPpConfig::validate() const {
  if (rri_min_ms < 1 || rri_min_ms > rri_max_ms) {
    throw std::invalid_argument("sps++: need 1 <= rri_min <= rri_max");
  }
  if (delta_ms < 1) {
    throw std::invalid_argument("sps++: delta must be positive");
  }
  if ((rri_max_ms - rri_min_ms) % delta_ms != 0) {
    throw std::invalid_argument("sps++: rri_max - rri_min must be a multiple of delta");
  }
  if (reservation_span_ms < rri_max_ms) {
    throw std::invalid_argument("sps++: reservation span shorter than rri_max");
  }
  if (sensing_window < rri_max_ms) {
    throw std::invalid_argument("sps++: sensing window shorter than rri_max");
  }
  if (!(p_step_db > 0.0)) {
    throw std::invalid_argument("sps++: p_step_db must be positive");
  }
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw std::invalid_argument("sps++: keep_fraction must lie in (0, 1]");
  }
}

AdaptiveSelection adaptive_select(const SensingWindow& window, const SpsPpConfig& config,
                                  int subchannels_per_tb, Rng& rng) {
  const std::vector<int> ladder = config.rri_ladder();
  // Scores do not depend on the threshold; compute each pool once.
  std::vector<CandidatePool> pools;
  pools.reserve(ladder.size());
  double max_rsrp_mw = 0.0;
  for (int r : ladder) {
    pools.push_back(score_candidates(window, r, SelectionWindow{1, r}, subchannels_per_tb));
    max_rsrp_mw = std::max(max_rsrp_mw, pools.back().max_occupied_rsrp_mw);
  }

  auto finish = [&](std::size_t idx, CandidateSet set) {
    AdaptiveSelection out;
    out.rri_ms = ladder[idx];
    out.selection = select_resource(set, config.keep_fraction, rng);
    out.resource = out.selection.resource;
    out.rc = config.reservation_count(out.rri_ms);
    out.candidates = std::move(set);
    return out;
  };

  double p_th = config.p_min_dbm;
  int raises = 0;
  for (;;) {
    const std::size_t start = raises > 0 && !config.restart_after_raise ? pools.size() - 1 : 0;
    for (std::size_t idx = start; idx < pools.size(); ++idx) {
      CandidateSet set;
      set.total = pools[idx].all.size();
      set.p_th_dbm = p_th;
      set.raises = raises;
      set.admitted = surviving(pools[idx], p_th);
      if (set.admitted.size() >= required_count(set.total, config.keep_fraction)) {
        return finish(idx, std::move(set));
      }
    }
    if (p_th > mw_to_dbm(max_rsrp_mw)) {
      // Every RSRP exclusion is gone; admit unmonitored candidates at rri_max.
      const std::size_t idx = pools.size() - 1;
      CandidateSet set;
      set.total = pools[idx].all.size();
      set.p_th_dbm = p_th;
      set.raises = raises;
      set.admitted = surviving(pools[idx], p_th, true);
      set.relaxed_unmonitored = true;
      return finish(idx, std::move(set));
    }
    p_th += config.p_step_db;
    ++raises;
  }
}

bool reselect_sps_pp(SchedulerState& state, const SensingWindow& window, const SpsPpConfig& config,
                     int subchannels_per_tb, Rng& rng) {
  const AdaptiveSelection sel = adaptive_select(window, config, subchannels_per_tb, rng);
  state.mode = SchedulerMode::adaptive_sps_pp;
  state.rri_ms = sel.rri_ms;
  state.selected = sel.resource;
  state.next_tx = sel.resource.subframe;
  state.p_th_dbm = sel.candidates.p_th_dbm;
  state.rc = sel.rc;
  state.needs_reselection = false;
  ++state.selections;
  return sel.candidates.relaxed_unmonitored;
}

void on_transmit_pp(SchedulerState& state) {
  if (state.rc < 1) {
    throw std::logic_error("on_transmit_pp: reservation counter already exhausted");
  }
  state.next_tx += state.rri_ms;
  if (--state.rc == 0) {
    state.needs_reselection = true;
  }
}

}  // namespace v2x
