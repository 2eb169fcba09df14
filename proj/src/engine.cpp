#include "v2x/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "v2x/rng.hpp"

namespace v2x {

std::string SchedulerSpec::name() const {
  if (mode == SchedulerMode::adaptive_sps_pp) {
    return "spspp";
  }
  return "sps" + std::to_string(rri_ms);
}

SchedulerSpec SchedulerSpec::parse(const std::string& name) {
  if (name == "spspp") {
    return adaptive();
  }
  if (name.size() > 3 && name.starts_with("sps")) {
    const std::string digits = name.substr(3);
    if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 6) {
      return fixed(std::stoi(digits));
    }
  }
  throw std::invalid_argument("unknown scheduler '" + name + "' (expected sps<rri> or spspp)");
}

std::int64_t SimConfig::ticks() const {
  return static_cast<std::int64_t>(std::llround(duration_s * 1000.0));
}

SpsConfig SimConfig::fixed_sps() const {
  SpsConfig c = sps;
  c.rri_ms = scheduler.rri_ms;
  return c;
}

void SimConfig::validate() const {
  if (!(duration_s > 0.0) || std::abs(duration_s * 1000.0 - static_cast<double>(ticks())) > 1e-6) {
    throw std::invalid_argument("duration must be a positive whole number of milliseconds");
  }
  if (trials < 1) {
    throw std::invalid_argument("trials must be at least 1");
  }
  if (sample_interval_ms < 1) {
    throw std::invalid_argument("sample interval must be at least 1 ms");
  }
  grid.validate();
  radio.validate();
  mobility.validate_geometry();
  risk.validate();
  if (scheduler.mode == SchedulerMode::fixed_sps) {
    fixed_sps().validate();
  } else {
    sps_pp.validate();
  }
}

namespace {

struct Vehicle {
  VehicleState spawn;
  bool active = false;
  SchedulerState sched;
  Rng rng;
};

double position_at(const VehicleState& v, std::int64_t tick, double road_length) {
  return wrap_position(v.x + v.velocity * static_cast<double>(tick) / 1000.0, road_length);
}

}  // namespace

RunRecord run(const SimConfig& config, int trial, const RunHooks& hooks) {
  config.validate();
  const std::uint64_t seed = trial_seed(config.base_seed, trial);
  const MobilityConfig& mob = config.mobility;
  const double road = mob.road_length_m;

  std::vector<VehicleState> spawned = hooks.vehicles ? *hooks.vehicles : spawn(mob, seed);
  const int n = static_cast<int>(spawned.size());
  for (int i = 0; i < n; ++i) {
    if (spawned[i].id != i) {
      throw std::invalid_argument("vehicle ids must be 0..n-1 in order");
    }
  }

  const bool adaptive = config.scheduler.mode == SchedulerMode::adaptive_sps_pp;
  const SpsConfig sps = config.fixed_sps();
  const int window_capacity = adaptive ? config.sps_pp.sensing_window : sps.sensing_window;
  const int tb_width = config.grid.subchannels_per_tb;

  Channel channel(config.grid, config.radio, road, combine_seed(seed, 0x5348414dULL));
  std::vector<Vehicle> vehicles;
  std::vector<SensingWindow> windows;
  vehicles.reserve(n);
  windows.reserve(n);
  for (const auto& s : spawned) {
    Vehicle v{s, false, SchedulerState{}, make_stream(seed, Stream::scheduler,
                                                      static_cast<std::uint64_t>(s.id))};
    v.sched.mode = config.scheduler.mode;
    v.sched.rri_ms = adaptive ? config.sps_pp.rri_min_ms : sps.rri_ms;
    vehicles.push_back(std::move(v));
    windows.emplace_back(window_capacity, config.grid.subchannels, channel.noise_floor_mw());
  }

  NeighborTable neighbors(n);
  PdrLedger ledger(n);
  std::vector<std::pair<int, Bsm>> in_flight;

  RunRecord record;
  record.scheduler = config.scheduler.name();
  record.density = n;
  record.trial = trial;

  std::vector<Transmission> txs;
  std::vector<Receiver> receivers;
  std::vector<Bsm> sent(static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> lane_y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    lane_y[i] = position_of(spawned[i], mob).y;
  }
  std::int64_t tx_since_sample = 0;

  const std::int64_t ticks = config.ticks();
  for (std::int64_t t = 1; t <= ticks; ++t) {
    const double now_s = static_cast<double>(t) / 1000.0;

    // 1. mobility
    for (int i = 0; i < n; ++i) {
      x[i] = position_at(vehicles[i].spawn, t, road);
    }

    // 2. activation
    for (auto& v : vehicles) {
      if (!v.active && v.spawn.activation_time_s <= now_s) {
        v.active = true;
        v.sched.needs_reselection = true;
      }
    }

    // 3. due transmissions
    txs.clear();
    for (int i = 0; i < n; ++i) {
      const Vehicle& v = vehicles[i];
      if (!v.active || v.sched.needs_reselection || v.sched.next_tx != t) {
        continue;
      }
      txs.push_back(Transmission{i, SubframeResource{t, v.sched.selected.subchannel},
                                 Position{x[i], lane_y[i]}});
      sent[i] = Bsm{i, now_s, x[i], v.spawn.velocity, 190};
    }
    tx_since_sample += static_cast<std::int64_t>(txs.size());

    // 4. PHY
    receivers.clear();
    for (int i = 0; i < n; ++i) {
      if (vehicles[i].active) {
        receivers.push_back(Receiver{i, Position{x[i], lane_y[i]}});
      }
    }
    const SubframeResult result = channel.resolve(txs, receivers);
    const auto J = static_cast<std::size_t>(config.grid.subchannels);
    for (std::size_t r = 0; r < receivers.size(); ++r) {
      windows[receivers[r].id].record(t, std::span(result.samples).subspan(r * J, J));
    }
    if (hooks.on_subframe) {
      hooks.on_subframe(t, txs, result);
    }

    // 5. neighbor tables: last subframe's deliveries land now
    for (const auto& [rx, bsm] : in_flight) {
      neighbors.update(rx, bsm);
    }
    in_flight.clear();
    for (const auto& out : result.outcomes) {
      if (out.failure == FailureCause::out_of_range) {
        continue;
      }
      ledger.record(out.sender, out.delivered);
      if (out.delivered) {
        in_flight.emplace_back(out.receiver, sent[out.sender]);
      }
    }

    // 6. scheduler bookkeeping and (re)selection
    for (const auto& tx : txs) {
      Vehicle& v = vehicles[tx.sender];
      if (adaptive) {
        on_transmit_pp(v.sched);
      } else {
        on_transmit(v.sched, v.rng, sps);
      }
    }
    for (int i = 0; i < n; ++i) {
      Vehicle& v = vehicles[i];
      if (!v.active || !v.sched.needs_reselection) {
        continue;
      }
      const bool relaxed = adaptive
                               ? reselect_sps_pp(v.sched, windows[i], config.sps_pp, tb_width, v.rng)
                               : reselect_sps(v.sched, windows[i], sps, tb_width, v.rng);
      record.relaxed_selections += relaxed ? 1 : 0;
      if (hooks.on_selection) {
        hooks.on_selection(t, i, v.sched);
      }
    }

    // 7. metrics
    if (t % config.sample_interval_ms != 0) {
      continue;
    }
    TickSample sample;
    sample.time_s = now_s;
    sample.transmissions = tx_since_sample;
    tx_since_sample = 0;
    std::vector<int> rri_now(static_cast<std::size_t>(n), 0);
    double rri_sum = 0.0;
    int rri_count = 0;
    for (int i = 0; i < n; ++i) {
      if (vehicles[i].active) {
        ++sample.active;
        if (vehicles[i].sched.selections > 0) {
          rri_now[i] = vehicles[i].sched.rri_ms;
          rri_sum += rri_now[i];
          ++rri_count;
        }
      }
    }
    sample.mean_rri_ms = rri_count > 0 ? rri_sum / rri_count : 0.0;

    for (int rv = 0; rv < n; ++rv) {
      if (!vehicles[rv].active) {
        continue;
      }
      const Position prx{x[rv], lane_y[rv]};
      for (int u = 0; u < n; ++u) {
        if (u == rv || !vehicles[u].active) {
          continue;
        }
        if (channel.distance(prx, Position{x[u], lane_y[u]}) > config.radio.comm_range_m) {
          continue;
        }
        // Speeds are constant after spawn, so the run-average relative speed
        // of the pair is the instantaneous one.
        const double s_uv = std::abs(vehicles[u].spawn.velocity - vehicles[rv].spawn.velocity);
        const auto ttc = true_ttc(x[u], x[rv], s_uv, config.risk, road);
        if (!ttc) {
          continue;
        }
        const Bsm* bsm = neighbors.latest(rv, u);
        PairSample ps;
        ps.e_track = tracking_error(x[u], bsm, road);
        ps.true_ttc = *ttc;
        ps.s_uv = s_uv;
        ps.s_u = std::abs(vehicles[u].spawn.velocity);
        sample.risk.add(ps, config.risk);
        if (ps.e_track) {
          sample.tracking_error_sum += *ps.e_track;
          ++sample.tracking_error_count;
        }
        if (hooks.on_pair) {
          PairObservation obs;
          obs.tick = t;
          obs.receiver = rv;
          obs.sender = u;
          obs.x_sender = x[u];
          obs.x_receiver = x[rv];
          if (bsm != nullptr) {
            obs.bsm = *bsm;
            obs.estimated_ttc = estimated_ttc(bsm->x, x[rv], s_uv, config.risk, road);
          }
          obs.s_uv = s_uv;
          obs.sample = ps;
          obs.risky = collision_risk(ps, config.risk);
          hooks.on_pair(obs);
        }
      }
    }
    sample.pdr_running = ledger.scenario_pdr();
    record.samples.push_back(sample);
    record.rri_series.push_back(std::move(rri_now));
  }

  finalize_aggregates(record, config.duration_s);
  return record;
}

void finalize_aggregates(RunRecord& record, double duration_s) {
  double te_sum = 0.0;
  std::int64_t te_count = 0;
  RiskTally tally;
  double rri_sum = 0.0;
  int rri_count = 0;
  for (const auto& s : record.samples) {
    te_sum += s.tracking_error_sum;
    te_count += s.tracking_error_count;
    tally += s.risk;
    if (s.mean_rri_ms > 0.0) {
      rri_sum += s.mean_rri_ms;
      ++rri_count;
    }
  }
  record.risk = tally;
  record.mean_tracking_error =
      te_count > 0 ? std::optional<double>(te_sum / static_cast<double>(te_count)) : std::nullopt;
  record.collision_risk_ratio = collision_risk_ratio(tally);
  record.pdr = record.samples.empty() ? std::nullopt : record.samples.back().pdr_running;
  record.mean_rri_ms = rri_count > 0 ? std::optional<double>(rri_sum / rri_count) : std::nullopt;

  record.rri_histogram.clear();
  for (std::size_t k = 0; k < record.samples.size() && k < record.rri_series.size(); ++k) {
    if (record.samples[k].time_s <= duration_s - 1.0 + 1e-9) {
      continue;
    }
    for (int rri : record.rri_series[k]) {
      if (rri > 0) {
        ++record.rri_histogram[rri];
      }
    }
  }
}

}  // namespace v2x
