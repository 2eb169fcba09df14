#pragma once

// Fixtures and brute-force oracles shared by the unit tests and the
// acceptance binary. The oracles work on plain arrays and never call into the
// sensing or scheduling code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "v2x/engine.hpp"
#include "v2x/sensing_window.hpp"

namespace v2x::testing {

inline constexpr double kNoiseDbm = -95.0;

/// Raw sensing history: slot s holds subframe s, so the window's next
/// subframe equals the capacity.
struct RawWindow {
  int capacity = 1000;
  int subchannels = 2;
  std::vector<SubchannelSample> cells;  // slot-major

  RawWindow(int cap, int j)
      : capacity(cap),
        subchannels(j),
        cells(static_cast<std::size_t>(cap) * j,
              SubchannelSample{true, std::pow(10.0, kNoiseDbm / 10.0),
                               std::pow(10.0, kNoiseDbm / 10.0)}) {}

  SubchannelSample& cell(int slot, int j) {
    return cells[static_cast<std::size_t>(slot) * subchannels + j];
  }
  const SubchannelSample& cell(int slot, int j) const {
    return cells[static_cast<std::size_t>(slot) * subchannels + j];
  }

  /// Marks a slot as carrying a decodable sender at `rsrp_dbm`.
  void occupy(int slot, int j, double rsrp_dbm, double rssi_dbm) {
    cell(slot, j) = SubchannelSample{true, std::pow(10.0, rsrp_dbm / 10.0),
                                     std::pow(10.0, rssi_dbm / 10.0)};
  }

  SensingWindow build() const {
    SensingWindow w(capacity, subchannels, std::pow(10.0, kNoiseDbm / 10.0));
    for (int s = 0; s < capacity; ++s) {
      w.record(s, std::span(cells).subspan(static_cast<std::size_t>(s) * subchannels,
                                           static_cast<std::size_t>(subchannels)));
    }
    return w;
  }
};

/// Slots whose subframe is congruent to `subframe` modulo `rri`, newest
/// first, limited to floor(capacity / rri) entries.
inline std::vector<int> periodic_slots(int capacity, std::int64_t subframe, int rri) {
  std::vector<int> slots;
  for (int s = capacity - 1; s >= 0; --s) {
    if (((s - subframe) % rri + rri) % rri == 0) {
      slots.push_back(s);
    }
  }
  slots.resize(std::min<std::size_t>(slots.size(), static_cast<std::size_t>(capacity / rri)));
  return slots;
}

struct OracleStats {
  bool monitored = true;
  bool occupied = false;
  double rsrp_mw = 0.0;
  double rssi_mw = 0.0;
};

/// Linear average over the periodic slots of the candidate subframe and the
/// subchannel group [first, first + width).
inline OracleStats oracle_stats(const RawWindow& raw, std::int64_t subframe, int rri, int first,
                                int width) {
  const double noise = std::pow(10.0, kNoiseDbm / 10.0);
  OracleStats st;
  const auto slots = periodic_slots(raw.capacity, subframe, rri);
  for (int s : slots) {
    for (int j = first; j < first + width; ++j) {
      const auto& c = raw.cell(s, j);
      st.monitored = st.monitored && c.monitored;
      st.occupied = st.occupied || c.rsrp_mw > noise;
      st.rsrp_mw += c.rsrp_mw;
      st.rssi_mw += c.rssi_mw;
    }
  }
  const double n = static_cast<double>(slots.size() * static_cast<std::size_t>(width));
  st.rsrp_mw /= n;
  st.rssi_mw /= n;
  return st;
}

struct OracleCandidate {
  std::int64_t subframe;
  int subchannel;
  OracleStats stats;
};

struct OracleSet {
  std::vector<OracleCandidate> admitted;
  std::size_t total = 0;
  double p_th = 0.0;
  bool relaxed = false;
};

/// Exclusion loop of one RRI, written out from its definition.
inline OracleSet oracle_candidates(const RawWindow& raw, int rri, int t1, int t2, int width,
                                   double p_min, double p_step, double keep) {
  const std::int64_t n = raw.capacity;
  std::vector<OracleCandidate> all;
  for (int off = t1; off <= t2; ++off) {
    for (int first = 0; first + width <= raw.subchannels; ++first) {
      all.push_back({n + off, first, oracle_stats(raw, n + off, rri, first, width)});
    }
  }
  double max_rsrp = -1e300;
  for (const auto& c : all) {
    if (c.stats.monitored && c.stats.occupied) {
      max_rsrp = std::max(max_rsrp, 10.0 * std::log10(c.stats.rsrp_mw));
    }
  }
  OracleSet out;
  out.total = all.size();
  const auto need = static_cast<std::size_t>(std::ceil(keep * static_cast<double>(all.size()) - 1e-9));
  for (double p = p_min;; p += p_step) {
    out.admitted.clear();
    for (const auto& c : all) {
      const bool hot = c.stats.occupied && 10.0 * std::log10(c.stats.rsrp_mw) >= p;
      if (c.stats.monitored && !hot) {
        out.admitted.push_back(c);
      }
    }
    out.p_th = p;
    if (out.admitted.size() >= need) {
      return out;
    }
    if (p > max_rsrp) {
      out.admitted.clear();
      for (const auto& c : all) {
        const bool hot = c.stats.occupied && 10.0 * std::log10(c.stats.rsrp_mw) >= p;
        if (!hot) {
          out.admitted.push_back(c);
        }
      }
      out.relaxed = true;
      return out;
    }
  }
}

/// Random sensing history with occupied, idle and unmonitored slots.
inline RawWindow random_window(std::uint64_t seed, int capacity = 1000, int subchannels = 2,
                               double busy = 0.5, double deaf = 0.002) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> power(-100.0, -50.0);
  RawWindow raw(capacity, subchannels);
  for (int s = 0; s < capacity; ++s) {
    const double roll = u(rng);
    if (roll < deaf) {
      for (int j = 0; j < subchannels; ++j) {
        raw.cell(s, j).monitored = false;
      }
    } else if (roll < deaf + busy) {
      const double p = power(rng);
      for (int j = 0; j < subchannels; ++j) {
        raw.occupy(s, j, p, p + 1.0 + u(rng));
      }
    }
  }
  return raw;
}

/// Static single cluster: `m` vehicles spread over [0, span] m so every pair
/// is in range, activating at uniform times in the first `entry_s` seconds.
inline std::vector<VehicleState> cluster(int m, std::uint64_t seed, double span = 200.0,
                                         double entry_s = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, span);
  std::uniform_real_distribution<double> ua(0.0, entry_s);
  std::vector<VehicleState> out;
  for (int i = 0; i < m; ++i) {
    const double x = ux(rng);
    const double a = ua(rng);
    out.push_back(VehicleState{i, i % 6, x, 0.0, a});
  }
  return out;
}

/// Mean RRI over the vehicles holding reservations in the samples taken
/// after `from_s`.
inline double mean_rri_after(const RunRecord& rec, double from_s) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < rec.samples.size(); ++k) {
    if (rec.samples[k].time_s <= from_s + 1e-9) {
      continue;
    }
    for (int r : rec.rri_series[k]) {
      if (r > 0) {
        sum += r;
        ++n;
      }
    }
  }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace v2x::testing
