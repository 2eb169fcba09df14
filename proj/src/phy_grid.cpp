#include "v2x/phy_grid.hpp"

#include "v2x/rng.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace v2x {

void GridConfig::validate() const {
  if (subframe_duration_ms != 1) {
    throw std::invalid_argument("grid: subframe duration must be 1 ms");
  }
  if (subchannels < 1) {
    throw std::invalid_argument("grid: at least one subchannel is required");
  }
  if (subchannels_per_tb < 1 || subchannels_per_tb > subchannels) {
    throw std::invalid_argument("grid: subchannels_per_tb must lie in [1, subchannels]");
  }
  if (!(bandwidth_hz > 0.0) || !(carrier_frequency_hz > 0.0)) {
    throw std::invalid_argument("grid: bandwidth and carrier frequency must be positive");
  }
}

void RadioConfig::validate() const {
  if (!(comm_range_m > 0.0)) {
    throw std::invalid_argument("radio: comm_range must be positive");
  }
  if (shadowing_std_db < 0.0) {
    throw std::invalid_argument("radio: shadowing_std_db must be nonnegative");
  }
}

const char* to_string(FailureCause cause) {
  switch (cause) {
    case FailureCause::out_of_range:
      return "out_of_range";
    case FailureCause::half_duplex:
      return "half_duplex";
    case FailureCause::sinr_below_threshold:
      return "sinr_below_threshold";
  }
  return "unknown";
}

double path_loss_intercept_db(double carrier_frequency_hz) {
  return 41.0 + 20.0 * std::log10(carrier_frequency_hz / 1e9 / 5.0);
}

double path_loss_db(double distance_m, double carrier_frequency_hz) {
  const double d = std::max(distance_m, 1.0);
  return 22.7 * std::log10(d) + path_loss_intercept_db(carrier_frequency_hz);
}

double rsrp_dbm(double tx_power_dbm, double distance_m, double carrier_frequency_hz) {
  return tx_power_dbm - path_loss_db(distance_m, carrier_frequency_hz);
}

double noise_floor_dbm(const GridConfig& grid, const RadioConfig& radio) {
  return -174.0 + 10.0 * std::log10(grid.bandwidth_hz) + radio.noise_figure_db;
}

double ring_distance(double a, double b, double road_length) {
  const double d = std::abs(a - b);
  if (road_length <= 0.0) {
    return d;
  }
  const double wrapped = std::fmod(d, road_length);
  return std::min(wrapped, road_length - wrapped);
}

Channel::Channel(GridConfig grid, RadioConfig radio, double road_length_m,
                 std::uint64_t shadowing_seed)
    : grid_(grid),
      radio_(radio),
      road_length_(road_length_m),
      noise_mw_(dbm_to_mw(noise_floor_dbm(grid, radio))),
      sinr_threshold_linear_(std::pow(10.0, radio.sinr_threshold_db / 10.0)),
      shadowing_seed_(shadowing_seed) {
  grid_.validate();
  radio_.validate();
}

double Channel::shadowing_draw(int sender, int receiver, std::int64_t subframe) const {
  // Stateless standard normal keyed by link and subframe (Box-Muller).
  const std::uint64_t key = combine_seed(
      combine_seed(shadowing_seed_, static_cast<std::uint64_t>(subframe)),
      (static_cast<std::uint64_t>(sender) << 32) | static_cast<std::uint32_t>(receiver));
  const double u1 = (static_cast<double>(mix64(key) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(mix64(key + 1) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Channel::distance(const Position& a, const Position& b) const {
  const double dx = ring_distance(a.x, b.x, road_length_);
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

SubframeResult Channel::resolve(std::span<const Transmission> transmissions,
                                std::span<const Receiver> receivers) const {
  const int subchannels = grid_.subchannels;
  const int width = grid_.subchannels_per_tb;

  std::unordered_set<int> senders;
  for (const auto& tx : transmissions) {
    if (tx.resource.subframe != transmissions.front().resource.subframe) {
      throw std::invalid_argument("resolve: transmissions span several subframes");
    }
    if (!senders.insert(tx.sender).second) {
      throw std::invalid_argument("resolve: sender " + std::to_string(tx.sender) +
                                  " transmits twice in one subframe");
    }
    if (tx.resource.subchannel < 0 || tx.resource.subchannel + width > subchannels) {
      throw std::invalid_argument("resolve: transport block exceeds the subchannel range");
    }
  }

  SubframeResult result;
  result.samples.resize(receivers.size() * static_cast<std::size_t>(subchannels));
  result.outcomes.reserve(transmissions.size() * receivers.size());

  std::vector<double> rx_mw(transmissions.size());
  std::vector<double> dist(transmissions.size());
  std::vector<double> total_mw(static_cast<std::size_t>(subchannels));

  for (std::size_t r = 0; r < receivers.size(); ++r) {
    const Receiver& rx = receivers[r];
    auto samples = std::span(result.samples).subspan(r * subchannels, subchannels);
    const bool transmitting = senders.contains(rx.id);

    std::fill(total_mw.begin(), total_mw.end(), noise_mw_);
    for (auto& s : samples) {
      s = SubchannelSample{!transmitting, noise_mw_, noise_mw_};
    }

    for (std::size_t k = 0; k < transmissions.size(); ++k) {
      const Transmission& tx = transmissions[k];
      if (tx.sender == rx.id) {
        rx_mw[k] = 0.0;
        continue;
      }
      dist[k] = distance(tx.position, rx.position);
      double power_dbm = rsrp_dbm(radio_.tx_power_dbm, dist[k], grid_.carrier_frequency_hz);
      if (radio_.shadowing_std_db > 0.0) {
        power_dbm += radio_.shadowing_std_db * shadowing_draw(tx.sender, rx.id, tx.resource.subframe);
      }
      rx_mw[k] = dbm_to_mw(power_dbm);
      for (int j = tx.resource.subchannel; j < tx.resource.subchannel + width; ++j) {
        total_mw[j] += rx_mw[k];
        if (dist[k] <= radio_.comm_range_m) {
          samples[j].rsrp_mw = std::max(samples[j].rsrp_mw, rx_mw[k]);
        }
      }
    }
    for (int j = 0; j < subchannels; ++j) {
      samples[j].rssi_mw = total_mw[j];
    }

    for (std::size_t k = 0; k < transmissions.size(); ++k) {
      const Transmission& tx = transmissions[k];
      if (tx.sender == rx.id) {
        continue;
      }
      ReceptionOutcome out{tx.sender, rx.id, tx.resource.subframe, false, std::nullopt};
      if (dist[k] > radio_.comm_range_m) {
        out.failure = FailureCause::out_of_range;
      } else if (transmitting) {
        out.failure = FailureCause::half_duplex;
      } else {
        // Worst subchannel of the TB decides.
        bool ok = true;
        for (int j = tx.resource.subchannel; j < tx.resource.subchannel + width && ok; ++j) {
          double interference = 0.0;
          for (std::size_t m = 0; m < transmissions.size(); ++m) {
            const int first = transmissions[m].resource.subchannel;
            if (m != k && j >= first && j < first + width) {
              interference += rx_mw[m];
            }
          }
          ok = rx_mw[k] / (noise_mw_ + interference) >= sinr_threshold_linear_;
        }
        out.delivered = ok;
        if (!ok) {
          out.failure = FailureCause::sinr_below_threshold;
        }
      }
      result.outcomes.push_back(out);
    }
  }
  return result;
}

}  // namespace v2x
