#pragma once

#include <cstdint>
#include <vector>

#include "v2x/phy_grid.hpp"

namespace v2x {

/// Kinematic state of one vehicle on the warp-around highway. Lanes in the
/// lower half of the road move in +x, lanes in the upper half in -x.
struct VehicleState {
  int id = 0;
  int lane = 0;
  double x = 0.0;
  double velocity = 0.0;
  double activation_time_s = 0.0;
};

struct MobilityConfig {
  double road_length_m = 2000.0;
  int lane_count = 6;
  double lane_width_m = 4.0;
  double v_avg = 19.44;
  double v_std = 3.0;
  int density = 160;  ///< vehicles on the whole segment
  /// Activation times are drawn uniformly in [0, entry_span]. Negative selects
  /// min(2 s + density / 160 * 4 s, 6 s).
  double entry_span_s = -1.0;

  double effective_entry_span() const;
  /// Validates everything but the density, which spawn() accepts down to zero.
  void validate_geometry() const;
  void validate() const;
};

/// Places `density` vehicles: positions follow an exponential-gap (Poisson)
/// process per direction, lanes are uniform within the direction group and
/// speeds are Normal(v_avg, v_std) per vehicle.
std::vector<VehicleState> spawn(const MobilityConfig& config, std::uint64_t seed);

/// Advances x by velocity * dt modulo the road length.
VehicleState step(const VehicleState& state, double dt_s, double road_length_m);

/// Wraps a longitudinal coordinate into [0, road_length).
double wrap_position(double x, double road_length_m);

inline bool forward_lane(int lane, int lane_count) { return lane < lane_count / 2; }

Position position_of(const VehicleState& v, const MobilityConfig& config);

}  // namespace v2x
