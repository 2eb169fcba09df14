#include "v2x/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "v2x/rng.hpp"

namespace v2x {

double MobilityConfig::effective_entry_span() const {
  if (entry_span_s >= 0.0) {
    return entry_span_s;
  }
  return std::min(2.0 + static_cast<double>(density) / 160.0 * 4.0, 6.0);
}

void MobilityConfig::validate_geometry() const {
  if (!(road_length_m > 0.0) || !(lane_width_m > 0.0)) {
    throw std::invalid_argument("mobility: road length and lane width must be positive");
  }
  if (lane_count < 2 || lane_count % 2 != 0) {
    throw std::invalid_argument("mobility: lane_count must be a positive even number");
  }
  if (!(v_avg > 0.0) || !(v_std > 0.0)) {
    throw std::invalid_argument("mobility: v_avg and v_std must be positive");
  }
}

void MobilityConfig::validate() const {
  validate_geometry();
  if (density < 2) {
    throw std::invalid_argument("mobility: density must be at least 2 vehicles");
  }
}

double wrap_position(double x, double road_length_m) {
  double w = std::fmod(x, road_length_m);
  if (w < 0.0) {
    w += road_length_m;
  }
  // fmod of a tiny negative value can round up to exactly road_length.
  return w >= road_length_m ? 0.0 : w;
}

std::vector<VehicleState> spawn(const MobilityConfig& config, std::uint64_t seed) {
  config.validate_geometry();
  std::vector<VehicleState> vehicles;
  if (config.density <= 0) {
    return vehicles;
  }
  vehicles.reserve(static_cast<std::size_t>(config.density));
  const int lanes_per_direction = config.lane_count / 2;
  const int counts[2] = {(config.density + 1) / 2, config.density / 2};
  const double entry_span = config.effective_entry_span();

  int id = 0;
  for (int dir = 0; dir < 2; ++dir) {
    const int count = counts[dir];
    if (count == 0) {
      continue;
    }
    Rng pos_rng = make_stream(seed, Stream::spawn_position, static_cast<std::uint64_t>(dir));
    std::exponential_distribution<double> gap(1.0);
    std::uniform_real_distribution<double> offset_dist(0.0, config.road_length_m);
    std::vector<double> cumulative(static_cast<std::size_t>(count) + 1);
    double sum = 0.0;
    for (auto& c : cumulative) {
      sum += gap(pos_rng);
      c = sum;
    }
    const double offset = offset_dist(pos_rng);

    for (int k = 0; k < count; ++k, ++id) {
      Rng lane_rng = make_stream(seed, Stream::spawn_lane, static_cast<std::uint64_t>(id));
      Rng speed_rng = make_stream(seed, Stream::spawn_speed, static_cast<std::uint64_t>(id));
      Rng act_rng = make_stream(seed, Stream::activation, static_cast<std::uint64_t>(id));
      std::uniform_int_distribution<int> lane_dist(0, lanes_per_direction - 1);
      std::normal_distribution<double> speed_dist(config.v_avg, config.v_std);
      std::uniform_real_distribution<double> act_dist(0.0, entry_span);

      double speed = speed_dist(speed_rng);
      while (speed <= 0.0) {
        speed = speed_dist(speed_rng);
      }
      VehicleState v;
      v.id = id;
      v.lane = lane_dist(lane_rng) + dir * lanes_per_direction;
      v.x = wrap_position(offset + config.road_length_m * cumulative[k] / cumulative[count],
                          config.road_length_m);
      v.velocity = dir == 0 ? speed : -speed;
      v.activation_time_s = entry_span > 0.0 ? act_dist(act_rng) : 0.0;
      vehicles.push_back(v);
    }
  }
  return vehicles;
}

VehicleState step(const VehicleState& state, double dt_s, double road_length_m) {
  if (!(dt_s > 0.0)) {
    throw std::invalid_argument("step: dt must be positive");
  }
  VehicleState next = state;
  next.x = wrap_position(state.x + state.velocity * dt_s, road_length_m);
  return next;
}

Position position_of(const VehicleState& v, const MobilityConfig& config) {
  return Position{v.x, (v.lane + 0.5) * config.lane_width_m};
}

}  // namespace v2x
