#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace v2x {

/// Basic safety message: the sender's longitudinal state at generation time.
struct Bsm {
  int sender = 0;
  double generation_time_s = 0.0;
  double x = 0.0;
  double velocity = 0.0;
  int size_bytes = 190;
};

/// Freshest delivered BSM per (receiver, sender).
class NeighborTable {
 public:
  explicit NeighborTable(int vehicles);

  int size() const { return vehicles_; }

  /// Stores `bsm` unless an equally fresh or fresher one is already held.
  void update(int receiver, const Bsm& bsm);

  const Bsm* latest(int receiver, int sender) const;

 private:
  int vehicles_;
  std::vector<std::optional<Bsm>> entries_;
};

struct RiskConfig {
  double deceleration = 4.6;  ///< m/s^2
  double t_react_s = 1.0;
  double e_track_th_m = 0.5;
  double s_uv_floor = 0.1;  ///< m/s

  void validate() const;
};

/// |x_true - x_bsm| on the ring, or nullopt while no BSM has been received.
std::optional<double> tracking_error(double x_true, const Bsm* bsm, double road_length_m);

/// Distance from the receiver to the sender's reported position divided by the
/// relative speed; nullopt when s_uv is below the floor (no approach).
std::optional<double> estimated_ttc(double x_reported, double x_receiver, double s_uv,
                                    const RiskConfig& cfg, double road_length_m);

std::optional<double> true_ttc(double x_sender, double x_receiver, double s_uv,
                               const RiskConfig& cfg, double road_length_m);

/// Reaction time plus braking time s_u / a.
double ttc_threshold(double s_u, const RiskConfig& cfg);

/// One ordered (receiver, sender) pair at one sampling instant.
struct PairSample {
  std::optional<double> e_track;  ///< nullopt = untracked
  double true_ttc = 0.0;
  double s_uv = 0.0;
  double s_u = 0.0;
};

/// 1 iff the TTC error e_track / s_uv exceeds e_th / s_uv while the true TTC
/// is under the threshold. An untracked pair is risky whenever the true TTC
/// is under the threshold.
int collision_risk(const PairSample& pair, const RiskConfig& cfg);

struct RiskTally {
  std::int64_t risky = 0;
  std::int64_t safe = 0;
  std::int64_t untracked_risky = 0;
  std::int64_t untracked_safe = 0;

  void add(const PairSample& pair, const RiskConfig& cfg);
  RiskTally& operator+=(const RiskTally& other);
  std::int64_t instances() const { return risky + safe + untracked_risky + untracked_safe; }
};

/// Risky instances (tracked and untracked) over all instances; nullopt when
/// nothing was evaluated.
std::optional<double> collision_risk_ratio(const RiskTally& tally);
std::optional<double> collision_risk_ratio(const std::vector<int>& instances);

/// Per-sender delivery bookkeeping over in-range receivers.
class PdrLedger {
 public:
  explicit PdrLedger(int vehicles);

  void record(int sender, bool delivered);

  std::int64_t opportunities(int sender) const { return attempts_[sender]; }
  std::int64_t deliveries(int sender) const { return successes_[sender]; }

  /// PR_u / PD_u, or nullopt when PD_u is zero.
  std::optional<double> vehicle_pdr(int sender) const;
  /// Mean of vehicle_pdr over vehicles with at least one opportunity.
  std::optional<double> scenario_pdr() const;

 private:
  std::vector<std::int64_t> attempts_;
  std::vector<std::int64_t> successes_;
};

}  // namespace v2x
