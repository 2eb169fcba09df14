#include "v2x/safety_metrics.hpp"

#include <stdexcept>

#include "v2x/phy_grid.hpp"

namespace v2x {

NeighborTable::NeighborTable(int vehicles)
    : vehicles_(vehicles), entries_(static_cast<std::size_t>(vehicles) * vehicles) {}

void NeighborTable::update(int receiver, const Bsm& bsm) {
  auto& slot = entries_[static_cast<std::size_t>(receiver) * vehicles_ + bsm.sender];
  if (!slot || slot->generation_time_s < bsm.generation_time_s) {
    slot = bsm;
  }
}

const Bsm* NeighborTable::latest(int receiver, int sender) const {
  const auto& slot = entries_[static_cast<std::size_t>(receiver) * vehicles_ + sender];
  return slot ? &*slot : nullptr;
}

void RiskConfig::validate() const {
  if (!(deceleration > 0.0) || !(t_react_s > 0.0) || !(e_track_th_m > 0.0) ||
      !(s_uv_floor > 0.0)) {
    throw std::invalid_argument("risk: all parameters must be strictly positive");
  }
}

std::optional<double> tracking_error(double x_true, const Bsm* bsm, double road_length_m) {
  if (bsm == nullptr) {
    return std::nullopt;
  }
  return ring_distance(x_true, bsm->x, road_length_m);
}

std::optional<double> estimated_ttc(double x_reported, double x_receiver, double s_uv,
                                    const RiskConfig& cfg, double road_length_m) {
  if (s_uv < cfg.s_uv_floor) {
    return std::nullopt;
  }
  return ring_distance(x_reported, x_receiver, road_length_m) / s_uv;
}

std::optional<double> true_ttc(double x_sender, double x_receiver, double s_uv,
                               const RiskConfig& cfg, double road_length_m) {
  return estimated_ttc(x_sender, x_receiver, s_uv, cfg, road_length_m);
}

double ttc_threshold(double s_u, const RiskConfig& cfg) {
  if (s_u < 0.0) {
    throw std::invalid_argument("ttc_threshold: speed must be nonnegative");
  }
  return s_u / cfg.deceleration + cfg.t_react_s;
}

int collision_risk(const PairSample& pair, const RiskConfig& cfg) {
  const bool within_threshold = pair.true_ttc < ttc_threshold(pair.s_u, cfg);
  if (!pair.e_track) {
    return within_threshold ? 1 : 0;
  }
  const double ttc_error = *pair.e_track / pair.s_uv;
  return (ttc_error > cfg.e_track_th_m / pair.s_uv && within_threshold) ? 1 : 0;
}

void RiskTally::add(const PairSample& pair, const RiskConfig& cfg) {
  const bool risky_now = collision_risk(pair, cfg) == 1;
  if (pair.e_track) {
    ++(risky_now ? risky : safe);
  } else {
    ++(risky_now ? untracked_risky : untracked_safe);
  }
}

RiskTally& RiskTally::operator+=(const RiskTally& other) {
  risky += other.risky;
  safe += other.safe;
  untracked_risky += other.untracked_risky;
  untracked_safe += other.untracked_safe;
  return *this;
}

std::optional<double> collision_risk_ratio(const RiskTally& tally) {
  if (tally.instances() == 0) {
    return std::nullopt;
  }
  return static_cast<double>(tally.risky + tally.untracked_risky) /
         static_cast<double>(tally.instances());
}

std::optional<double> collision_risk_ratio(const std::vector<int>& instances) {
  if (instances.empty()) {
    return std::nullopt;
  }
  std::int64_t risky = 0;
  for (int r : instances) {
    risky += r;
  }
  return static_cast<double>(risky) / static_cast<double>(instances.size());
}

PdrLedger::PdrLedger(int vehicles)
    : attempts_(static_cast<std::size_t>(vehicles), 0),
      successes_(static_cast<std::size_t>(vehicles), 0) {}

void PdrLedger::record(int sender, bool delivered) {
  ++attempts_[sender];
  if (delivered) {
    ++successes_[sender];
  }
}

std::optional<double> PdrLedger::vehicle_pdr(int sender) const {
  if (attempts_[sender] == 0) {
    return std::nullopt;
  }
  return static_cast<double>(successes_[sender]) / static_cast<double>(attempts_[sender]);
}

std::optional<double> PdrLedger::scenario_pdr() const {
  double sum = 0.0;
  int counted = 0;
  for (std::size_t u = 0; u < attempts_.size(); ++u) {
    if (const auto p = vehicle_pdr(static_cast<int>(u))) {
      sum += *p;
      ++counted;
    }
  }
  if (counted == 0) {
    return std::nullopt;
  }
  return sum / counted;
}

}  // namespace v2x
