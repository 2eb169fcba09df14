#include "v2x/sps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace v2x {

PhaseStats phase_stats(const SensingWindow& window, int phase, SubchannelGroup group, int rri_ms) {
  if (rri_ms < 1 || phase < 0 || phase >= rri_ms) {
    throw std::out_of_range("phase " + std::to_string(phase) + " outside [0, " +
                            std::to_string(rri_ms) + ")");
  }
  if (group.first < 0 || group.count < 1 || group.first + group.count > window.subchannels()) {
    throw std::out_of_range("subchannel group outside the grid");
  }
  const int capacity = window.capacity();
  const int periods = capacity / rri_ms;
  if (periods < 1) {
    throw std::out_of_range("RRI longer than the sensing window");
  }

  PhaseStats stats;
  double rsrp = 0.0;
  double rssi = 0.0;
  // Most recent slot congruent to phase; for RRIs dividing the capacity this
  // walks exactly {phase, phase + rri, ..., phase + (K - 1) * rri}.
  const int last = phase + rri_ms * ((capacity - 1 - phase) / rri_ms);
  for (int k = 0; k < periods; ++k) {
    const int slot = last - k * rri_ms;
    for (int j = group.first; j < group.first + group.count; ++j) {
      const SubchannelSample& s = window.at(slot, j);
      stats.monitored = stats.monitored && s.monitored;
      stats.occupied = stats.occupied || s.rsrp_mw > window.noise_floor_mw();
      rsrp += s.rsrp_mw;
      rssi += s.rssi_mw;
    }
  }
  const double n = static_cast<double>(periods) * group.count;
  stats.rsrp_mw = rsrp / n;
  stats.rssi_mw = rssi / n;
  return stats;
}

std::optional<double> avg_rsrp(const SensingWindow& window, int phase, SubchannelGroup group,
                               int rri_ms) {
  const PhaseStats stats = phase_stats(window, phase, group, rri_ms);
  if (!stats.monitored) {
    return std::nullopt;
  }
  return mw_to_dbm(stats.rsrp_mw);
}

std::optional<double> avg_s_rssi(const SensingWindow& window, int phase, SubchannelGroup group,
                                 int rri_ms) {
  const PhaseStats stats = phase_stats(window, phase, group, rri_ms);
  if (!stats.monitored) {
    return std::nullopt;
  }
  return mw_to_dbm(stats.rssi_mw);
}

CandidatePool score_candidates(const SensingWindow& window, int rri_ms, SelectionWindow selection,
                               int subchannels_per_tb) {
  if (selection.t1 < 1 || selection.t2 < selection.t1 || selection.t2 - selection.t1 >= rri_ms) {
    throw std::invalid_argument("selection window must satisfy 1 <= t1 <= t2 < t1 + rri");
  }
  const std::int64_t n = window.next_subframe();
  const int placements = window.subchannels() - subchannels_per_tb + 1;
  CandidatePool pool;
  pool.rri_ms = rri_ms;
  pool.all.reserve(static_cast<std::size_t>(selection.t2 - selection.t1 + 1) * placements);
  for (int offset = selection.t1; offset <= selection.t2; ++offset) {
    // Window slot w holds subframe n - capacity + w.
    const int phase = (offset + window.capacity()) % rri_ms;
    for (int first = 0; first < placements; ++first) {
      const PhaseStats stats =
          phase_stats(window, phase, SubchannelGroup{first, subchannels_per_tb}, rri_ms);
      pool.all.push_back({Candidate{n + offset, first, phase}, stats});
      if (stats.monitored && stats.occupied) {
        pool.max_occupied_rsrp_mw = std::max(pool.max_occupied_rsrp_mw, stats.rsrp_mw);
      }
    }
  }
  return pool;
}

std::vector<ScoredCandidate> surviving(const CandidatePool& pool, double p_th_dbm,
                                       bool relax_unmonitored) {
  std::vector<ScoredCandidate> out;
  out.reserve(pool.all.size());
  for (const auto& sc : pool.all) {
    if (!sc.stats.monitored && !relax_unmonitored) {
      continue;
    }
    if (sc.stats.occupied && mw_to_dbm(sc.stats.rsrp_mw) >= p_th_dbm) {
      continue;
    }
    out.push_back(sc);
  }
  return out;
}

std::size_t required_count(std::size_t total, double keep_fraction) {
  // The epsilon absorbs representation error such as 0.2 * 30 > 6.
  return static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(total) - 1e-9));
}

CandidateSet admit(const CandidatePool& pool, const ExclusionParams& params) {
  CandidateSet set;
  set.total = pool.all.size();
  const std::size_t required = required_count(set.total, params.keep_fraction);
  set.p_th_dbm = params.p_min_dbm;
  for (;;) {
    set.admitted = surviving(pool, set.p_th_dbm);
    if (set.admitted.size() >= required) {
      return set;
    }
    if (set.p_th_dbm > mw_to_dbm(pool.max_occupied_rsrp_mw)) {
      // Only unmonitored exclusions remain.
      set.admitted = surviving(pool, set.p_th_dbm, true);
      set.relaxed_unmonitored = true;
      return set;
    }
    set.p_th_dbm += params.p_step_db;
    ++set.raises;
  }
}

CandidateSet build_candidates(const SensingWindow& window, int rri_ms, SelectionWindow selection,
                              const ExclusionParams& params, int subchannels_per_tb) {
  return admit(score_candidates(window, rri_ms, selection, subchannels_per_tb), params);
}

std::vector<Candidate> shortlist(const CandidateSet& set, double keep_fraction) {
  std::vector<ScoredCandidate> ranked = set.admitted;
  std::sort(ranked.begin(), ranked.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.stats.rssi_mw != b.stats.rssi_mw) {
      return a.stats.rssi_mw < b.stats.rssi_mw;
    }
    return a.candidate < b.candidate;
  });
  const std::size_t keep = std::min(required_count(set.total, keep_fraction), ranked.size());
  std::vector<Candidate> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back(ranked[i].candidate);
  }
  return out;
}

Selection select_resource(const CandidateSet& set, double keep_fraction, Rng& rng) {
  const std::size_t required = required_count(set.total, keep_fraction);
  if (set.admitted.size() < required || set.admitted.empty()) {
    throw std::logic_error("select_resource: candidate set smaller than the keep fraction");
  }
  Selection sel;
  sel.shortlist = shortlist(set, keep_fraction);
  std::uniform_int_distribution<std::size_t> pick(0, sel.shortlist.size() - 1);
  sel.chosen = sel.shortlist[pick(rng)];
  sel.resource = SubframeResource{sel.chosen.subframe, sel.chosen.subchannel};
  return sel;
}

const RcRanges& default_rc_ranges() {
  static const RcRanges ranges{{20, {25, 75}}, {50, {10, 30}}, {100, {5, 15}}};
  return ranges;
}

int draw_rc(int rri_ms, Rng& rng, const RcRanges& ranges) {
  const auto it = ranges.find(rri_ms);
  if (it == ranges.end()) {
    throw std::invalid_argument("no reservation counter range for RRI " + std::to_string(rri_ms) +
                                " ms");
  }
  std::uniform_int_distribution<int> dist(it->second.first, it->second.second);
  return dist(rng);
}

void SpsConfig::validate() const {
  if (!rc_range.contains(rri_ms)) {
    throw std::invalid_argument("sps: RRI " + std::to_string(rri_ms) +
                                " ms has no reservation counter range");
  }
  if (t1 < 1 || t1 > 4) {
    throw std::invalid_argument("sps: t1 must lie in [1, 4]");
  }
  if (effective_t2() > rri_ms) {
    throw std::invalid_argument("sps: t2 (" + std::to_string(effective_t2()) +
                                ") exceeds the RRI (" + std::to_string(rri_ms) + ")");
  }
  if (effective_t2() < t1) {
    throw std::invalid_argument("sps: t2 must not precede t1");
  }
  if (!(p_step_db > 0.0)) {
    throw std::invalid_argument("sps: p_step_db must be positive");
  }
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw std::invalid_argument("sps: keep_fraction must lie in (0, 1]");
  }
  if (p_r < 0.0 || p_r > 1.0) {
    throw std::invalid_argument("sps: p_r must lie in [0, 1]");
  }
  if (sensing_window < rri_ms) {
    throw std::invalid_argument("sps: sensing window shorter than the RRI");
  }
  for (const auto& [rri, bounds] : rc_range) {
    if (bounds.first < 1 || bounds.second < bounds.first) {
      throw std::invalid_argument("sps: malformed counter range for RRI " + std::to_string(rri));
    }
  }
}

bool reselect_sps(SchedulerState& state, const SensingWindow& window, const SpsConfig& config,
                  int subchannels_per_tb, Rng& rng) {
  const CandidateSet set =
      build_candidates(window, config.rri_ms, SelectionWindow{config.t1, config.effective_t2()},
                       config.exclusion(), subchannels_per_tb);
  const Selection sel = select_resource(set, config.keep_fraction, rng);
  state.mode = SchedulerMode::fixed_sps;
  state.rri_ms = config.rri_ms;
  state.selected = sel.resource;
  state.next_tx = sel.resource.subframe;
  state.p_th_dbm = set.p_th_dbm;
  state.rc = draw_rc(config.rri_ms, rng, config.rc_range);
  state.needs_reselection = false;
  ++state.selections;
  return set.relaxed_unmonitored;
}

void on_transmit(SchedulerState& state, Rng& rng, const SpsConfig& config) {
  if (state.rc < 1) {
    throw std::logic_error("on_transmit: reservation counter already exhausted");
  }
  state.next_tx += state.rri_ms;
  if (--state.rc > 0) {
    return;
  }
  std::bernoulli_distribution keep(config.p_r);
  if (keep(rng)) {
    state.rc = draw_rc(state.rri_ms, rng, config.rc_range);
  } else {
    state.needs_reselection = true;
  }
}

}  // namespace v2x
