#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace v2x {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Mode-4 time-frequency grid. One subframe (TTI) is 1 ms and carries
/// `subchannels` subchannels; a BSM transport block spans `subchannels_per_tb`
/// contiguous subchannels.
struct GridConfig {
  int subframe_duration_ms = 1;
  int subchannels = 2;
  int subchannels_per_tb = 2;
  double bandwidth_hz = 10e6;
  double carrier_frequency_hz = 5.9e9;

  /// Number of distinct contiguous placements of one transport block.
  int tb_placements() const { return subchannels - subchannels_per_tb + 1; }
  void validate() const;
};

struct RadioConfig {
  double tx_power_dbm = 23.0;
  double noise_figure_db = 9.0;
  double sinr_threshold_db = 2.5;
  double comm_range_m = 300.0;
  /// Lognormal shadowing standard deviation; zero keeps the channel deterministic.
  double shadowing_std_db = 0.0;

  void validate() const;
};

struct SubframeResource {
  std::int64_t subframe = 0;
  int subchannel = 0;

  friend bool operator==(const SubframeResource&, const SubframeResource&) = default;
};

enum class FailureCause { out_of_range, half_duplex, sinr_below_threshold };

const char* to_string(FailureCause cause);

struct ReceptionOutcome {
  int sender = 0;
  int receiver = 0;
  std::int64_t subframe = 0;
  bool delivered = false;
  std::optional<FailureCause> failure;
};

/// Measurement one receiver takes on one subchannel during one subframe,
/// stored in linear milliwatts.
struct SubchannelSample {
  bool monitored = true;
  double rsrp_mw = 0.0;
  double rssi_mw = 0.0;
};

/// Position in road coordinates: longitudinal `x` (warps at road length) and
/// lateral `y` (lane centre).
struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct Transmission {
  int sender = 0;
  SubframeResource resource;
  Position position;
};

struct Receiver {
  int id = 0;
  Position position;
};

/// Result of resolving one subframe. `samples` is receiver-major:
/// samples[r * subchannels + j] belongs to receivers[r], subchannel j.
struct SubframeResult {
  std::vector<ReceptionOutcome> outcomes;
  std::vector<SubchannelSample> samples;
};

/// LOS log-distance path loss in dB; distances below 1 m are clamped to 1 m.
double path_loss_db(double distance_m, double carrier_frequency_hz = 5.9e9);

/// Path loss at the 1 m reference distance.
double path_loss_intercept_db(double carrier_frequency_hz = 5.9e9);

double rsrp_dbm(double tx_power_dbm, double distance_m, double carrier_frequency_hz = 5.9e9);

/// Thermal noise over the channel bandwidth plus the receiver noise figure.
double noise_floor_dbm(const GridConfig& grid, const RadioConfig& radio);

/// Circular distance on a ring of length `road_length` (no wrap when zero).
double ring_distance(double a, double b, double road_length);

class Channel {
 public:
  Channel(GridConfig grid, RadioConfig radio, double road_length_m,
          std::uint64_t shadowing_seed = 0);

  const GridConfig& grid() const { return grid_; }
  const RadioConfig& radio() const { return radio_; }
  double road_length() const { return road_length_; }
  double noise_floor_mw() const { return noise_mw_; }

  double distance(const Position& a, const Position& b) const;

  /// Resolves every (transmission, receiver) pair of one subframe.
  ///
  /// A receiver that transmits in the subframe is half-duplex: it decodes
  /// nothing and its samples are unmonitored. Senders beyond comm_range are
  /// not decodable and do not contribute to RSRP, but still add interference
  /// to S-RSSI and SINR. Per-subchannel powers are in whole-TB units: every
  /// subchannel a TB occupies carries the TB's full received power, and noise
  /// per subchannel equals the noise floor.
  ///
  /// Throws std::invalid_argument if the transmissions span several subframes
  /// or one sender appears twice.
  SubframeResult resolve(std::span<const Transmission> transmissions,
                         std::span<const Receiver> receivers) const;

 private:
  GridConfig grid_;
  RadioConfig radio_;
  double road_length_;
  double noise_mw_;
  double sinr_threshold_linear_;
  std::uint64_t shadowing_seed_;

  double shadowing_draw(int sender, int receiver, std::int64_t subframe) const;
};

}  // namespace v2x
