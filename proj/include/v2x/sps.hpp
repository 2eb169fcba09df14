#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "v2x/phy_grid.hpp"
#include "v2x/rng.hpp"
#include "v2x/sensing_window.hpp"

namespace v2x {

/// Contiguous subchannels occupied by one transport block.
struct SubchannelGroup {
  int first = 0;
  int count = 1;
};

/// Sensing-window statistics of one periodic candidate: the K most recent
/// window slots congruent to `phase` modulo the RRI, averaged linearly.
struct PhaseStats {
  bool monitored = true;  ///< false if any contributing slot was unmonitored
  bool occupied = false;  ///< true if any contributing slot carried a decodable sender
  double rsrp_mw = 0.0;
  double rssi_mw = 0.0;
};

PhaseStats phase_stats(const SensingWindow& window, int phase, SubchannelGroup group, int rri_ms);

/// Linear average RSRP (dBm) over the periodic slots of `phase`, or nullopt
/// when any contributing slot was not monitored. Throws std::out_of_range
/// for a phase outside [0, rri).
std::optional<double> avg_rsrp(const SensingWindow& window, int phase, SubchannelGroup group,
                               int rri_ms);

/// Same averaging for S-RSSI.
std::optional<double> avg_s_rssi(const SensingWindow& window, int phase, SubchannelGroup group,
                                 int rri_ms);

struct SelectionWindow {
  int t1 = 1;
  int t2 = 100;
};

struct ExclusionParams {
  double p_min_dbm = -110.0;
  double p_step_db = 3.0;
  double keep_fraction = 0.2;
};

/// One single-subframe candidate: the absolute subframe of the first
/// transmission and the first subchannel of the TB.
struct Candidate {
  std::int64_t subframe = 0;
  int subchannel = 0;
  int phase = 0;  ///< window-relative phase modulo the RRI

  friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

struct ScoredCandidate {
  Candidate candidate;
  PhaseStats stats;
};

/// Candidates of one selection window with their sensing statistics.
struct CandidatePool {
  int rri_ms = 0;
  std::vector<ScoredCandidate> all;
  double max_occupied_rsrp_mw = 0.0;
};

CandidatePool score_candidates(const SensingWindow& window, int rri_ms, SelectionWindow selection,
                               int subchannels_per_tb);

/// The candidates surviving exclusion at threshold `p_th_dbm`: monitored, and
/// not carrying sensed energy whose average RSRP reaches the threshold.
std::vector<ScoredCandidate> surviving(const CandidatePool& pool, double p_th_dbm,
                                       bool relax_unmonitored = false);

/// Smallest integer count that is at least keep_fraction * total.
std::size_t required_count(std::size_t total, double keep_fraction);

/// Set S_A after the threshold loop.
struct CandidateSet {
  std::vector<ScoredCandidate> admitted;
  std::size_t total = 0;
  double p_th_dbm = 0.0;
  int raises = 0;
  /// Set when even a threshold above every sensed RSRP left too few
  /// candidates and unmonitored candidates had to be admitted.
  bool relaxed_unmonitored = false;
};

/// Runs the exclusion loop on a pool, raising the threshold by p_step_db until
/// at least keep_fraction of the candidates survive.
CandidateSet admit(const CandidatePool& pool, const ExclusionParams& params);

CandidateSet build_candidates(const SensingWindow& window, int rri_ms, SelectionWindow selection,
                              const ExclusionParams& params, int subchannels_per_tb);

struct Selection {
  SubframeResource resource;
  Candidate chosen;
  std::vector<Candidate> shortlist;  ///< S_B
};

/// S_B: the ceil(keep_fraction * total) admitted candidates with the lowest
/// average S-RSSI; ties fall back to candidate order.
std::vector<Candidate> shortlist(const CandidateSet& set, double keep_fraction);

/// Picks one member of S_B uniformly. Throws std::logic_error if S_A is
/// smaller than the required fraction.
Selection select_resource(const CandidateSet& set, double keep_fraction, Rng& rng);

using RcRanges = std::map<int, std::pair<int, int>>;

/// Reservation counter bounds per RRI, each spanning 0.5 s to 1.5 s.
const RcRanges& default_rc_ranges();

/// Uniform counter in the inclusive range for `rri_ms`. Throws
/// std::invalid_argument for an RRI without a range.
int draw_rc(int rri_ms, Rng& rng, const RcRanges& ranges = default_rc_ranges());

struct SpsConfig {
  int rri_ms = 100;
  int t1 = 1;
  int t2 = 0;  ///< 0 means t2 = rri
  double p_min_dbm = -110.0;
  double p_step_db = 3.0;
  double keep_fraction = 0.2;
  double p_r = 0.8;
  int sensing_window = 1000;
  RcRanges rc_range = default_rc_ranges();

  int effective_t2() const { return t2 == 0 ? rri_ms : t2; }
  ExclusionParams exclusion() const { return {p_min_dbm, p_step_db, keep_fraction}; }
  void validate() const;
};

enum class SchedulerMode { fixed_sps, adaptive_sps_pp };

struct SchedulerState {
  SchedulerMode mode = SchedulerMode::fixed_sps;
  int rri_ms = 100;
  int rc = 0;
  SubframeResource selected;
  std::int64_t next_tx = -1;  ///< next transmission subframe, -1 before the first selection
  double p_th_dbm = 0.0;
  bool needs_reselection = true;
  int selections = 0;

  /// Phase of the reservation, subframe mod RRI.
  int phase() const { return static_cast<int>(selected.subframe % rri_ms); }
};

/// Selects a fresh resource for a fixed-RRI scheduler and draws its counter.
/// `window.next_subframe()` is the first subframe after the window. Returns
/// true if the unmonitored exclusion had to be relaxed.
bool reselect_sps(SchedulerState& state, const SensingWindow& window, const SpsConfig& config,
                  int subchannels_per_tb, Rng& rng);

/// Counter bookkeeping after one transmission. Throws std::logic_error if the
/// counter is already zero.
void on_transmit(SchedulerState& state, Rng& rng, const SpsConfig& config);

}  // namespace v2x
