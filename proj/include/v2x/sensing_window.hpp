#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "v2x/phy_grid.hpp"

namespace v2x {

/// Ring buffer of the last `capacity` subframes of per-subchannel sensing
/// samples. Slot 0 is the oldest subframe (n - capacity) and slot
/// capacity - 1 the newest (n - 1), where n is next_subframe().
///
/// Slots that were never recorded read as monitored noise-floor samples, so a
/// freshly activated vehicle can select immediately.
class SensingWindow {
 public:
  SensingWindow(int capacity, int subchannels, double noise_floor_mw);

  int capacity() const { return capacity_; }
  int subchannels() const { return subchannels_; }
  double noise_floor_mw() const { return noise_mw_; }

  /// First subframe after the window.
  std::int64_t next_subframe() const { return next_; }

  /// Stores the samples of `subframe`, which must not precede next_subframe().
  /// Skipped subframes are filled with monitored noise-floor samples.
  void record(std::int64_t subframe, std::span<const SubchannelSample> samples);

  const SubchannelSample& at(int slot, int subchannel) const;

  /// True if the slot holds energy from a decodable sender.
  bool occupied(int slot, int subchannel) const {
    return at(slot, subchannel).rsrp_mw > noise_mw_;
  }

 private:
  int capacity_;
  int subchannels_;
  double noise_mw_;
  std::int64_t next_ = 0;
  std::vector<SubchannelSample> ring_;

  void clear_slot(std::int64_t subframe);
};

}  // namespace v2x
