#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "v2x/mobility.hpp"
#include "v2x/phy_grid.hpp"
#include "v2x/safety_metrics.hpp"
#include "v2x/sps.hpp"
#include "v2x/sps_adaptive.hpp"

namespace v2x {

/// Which scheduler every vehicle of a run uses.
struct SchedulerSpec {
  SchedulerMode mode = SchedulerMode::adaptive_sps_pp;
  int rri_ms = 0;  ///< fixed-RRI SPS only

  /// "sps<rri>" or "spspp".
  std::string name() const;
  /// Inverse of name(); throws std::invalid_argument on anything else.
  static SchedulerSpec parse(const std::string& name);

  static SchedulerSpec fixed(int rri_ms) { return {SchedulerMode::fixed_sps, rri_ms}; }
  static SchedulerSpec adaptive() { return {SchedulerMode::adaptive_sps_pp, 0}; }

  friend bool operator==(const SchedulerSpec&, const SchedulerSpec&) = default;
};

struct SimConfig {
  double duration_s = 8.0;
  int trials = 10;
  std::uint64_t base_seed = 1;
  SchedulerSpec scheduler;
  GridConfig grid;
  RadioConfig radio;
  MobilityConfig mobility;
  SpsConfig sps;
  SpsPpConfig sps_pp;
  RiskConfig risk;
  int sample_interval_ms = 100;

  std::int64_t ticks() const;
  /// SPS configuration with the scheduler's RRI applied.
  SpsConfig fixed_sps() const;
  /// Throws std::invalid_argument describing the first violation.
  void validate() const;
};

/// Metric snapshot taken every sample_interval_ms.
struct TickSample {
  double time_s = 0.0;
  int active = 0;
  std::int64_t transmissions = 0;  ///< BSMs sent since the previous sample
  double tracking_error_sum = 0.0;
  std::int64_t tracking_error_count = 0;
  RiskTally risk;
  double mean_rri_ms = 0.0;  ///< over active vehicles holding a reservation; 0 if none
  /// Scenario PDR over the ledger accumulated so far.
  std::optional<double> pdr_running;
};

struct RunRecord {
  std::string scheduler;
  int density = 0;
  int trial = 0;
  std::vector<TickSample> samples;
  /// rri_series[k][vehicle] at samples[k]; 0 while inactive.
  std::vector<std::vector<int>> rri_series;

  std::optional<double> mean_tracking_error;
  std::optional<double> collision_risk_ratio;
  std::optional<double> pdr;
  std::optional<double> mean_rri_ms;
  RiskTally risk;
  /// RRI counts over the samples of the final second.
  std::map<int, std::int64_t> rri_histogram;
  std::int64_t relaxed_selections = 0;
};

/// One evaluated ordered (receiver, sender) pair, for observers.
struct PairObservation {
  std::int64_t tick = 0;
  int receiver = 0;
  int sender = 0;
  double x_sender = 0.0;
  double x_receiver = 0.0;
  std::optional<Bsm> bsm;
  double s_uv = 0.0;
  PairSample sample;
  std::optional<double> estimated_ttc;
  int risky = 0;
};

struct RunHooks {
  /// Replaces spawn() output (cluster and unit scenarios).
  std::optional<std::vector<VehicleState>> vehicles;
  std::function<void(const PairObservation&)> on_pair;
  std::function<void(std::int64_t tick, std::span<const Transmission>, const SubframeResult&)>
      on_subframe;
  std::function<void(std::int64_t tick, int vehicle, const SchedulerState&)> on_selection;
};

/// Runs one trial. The scenario seed depends only on (base_seed, trial), so all
/// scheduler variants of a trial share their spawn draws.
RunRecord run(const SimConfig& config, int trial, const RunHooks& hooks = {});

/// Recomputes a record's aggregates from its samples.
void finalize_aggregates(RunRecord& record, double duration_s);

}  // namespace v2x
