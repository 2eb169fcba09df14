#include "v2x/sensing_window.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2x {

SensingWindow::SensingWindow(int capacity, int subchannels, double noise_floor_mw)
    : capacity_(capacity), subchannels_(subchannels), noise_mw_(noise_floor_mw) {
  if (capacity < 1 || subchannels < 1) {
    throw std::invalid_argument("sensing window: capacity and subchannels must be positive");
  }
  ring_.assign(static_cast<std::size_t>(capacity) * subchannels,
               SubchannelSample{true, noise_floor_mw, noise_floor_mw});
}

void SensingWindow::clear_slot(std::int64_t subframe) {
  const auto base = static_cast<std::size_t>(subframe % capacity_) * subchannels_;
  std::fill_n(ring_.begin() + static_cast<std::ptrdiff_t>(base), subchannels_,
              SubchannelSample{true, noise_mw_, noise_mw_});
}

void SensingWindow::record(std::int64_t subframe, std::span<const SubchannelSample> samples) {
  if (subframe < next_) {
    throw std::invalid_argument("sensing window: subframe already recorded");
  }
  if (static_cast<int>(samples.size()) != subchannels_) {
    throw std::invalid_argument("sensing window: sample count does not match subchannels");
  }
  const std::int64_t gap_start = std::max(next_, subframe - capacity_);
  for (std::int64_t s = gap_start; s < subframe; ++s) {
    clear_slot(s);
  }
  const auto base = static_cast<std::size_t>(subframe % capacity_) * subchannels_;
  std::copy(samples.begin(), samples.end(), ring_.begin() + static_cast<std::ptrdiff_t>(base));
  next_ = subframe + 1;
}

const SubchannelSample& SensingWindow::at(int slot, int subchannel) const {
  // Slot w holds subframe n - capacity + w; negative subframes map to slots
  // that were never written and still hold their initial noise-floor value.
  std::int64_t subframe = next_ - capacity_ + slot;
  std::int64_t index = subframe % capacity_;
  if (index < 0) {
    index += capacity_;
  }
  return ring_[static_cast<std::size_t>(index) * subchannels_ + subchannel];
}

}  // namespace v2x
