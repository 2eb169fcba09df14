#include "v2x/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "v2x/analytic_model.hpp"

namespace v2x::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i ? sep : "") + items[i];
  }
  return out;
}

// Lossless, locale-independent number formatting.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// Reads keys of one JSON object into typed fields, recording problems instead
// of throwing so that validation can report every one of them.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) {
      errors_.push_back(path_ + ": expected an object");
    }
  }

  template <typename T>
  void get(const char* key, T& field) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) {
      return;
    }
    const json& v = obj_.at(key);
    const std::string where = path_.empty() ? key : path_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) {
        errors_.push_back(where + ": expected a boolean");
        return;
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        errors_.push_back(where + ": expected an integer");
        return;
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
          errors_.push_back(where + ": expected a non-negative integer");
          return;
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) {
        errors_.push_back(where + ": expected a number");
        return;
      }
    }
    try {
      field = v.get<T>();
    } catch (const json::exception&) {
      errors_.push_back(where + ": wrong value type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) {
      return nullptr;
    }
    return &obj_.at(key);
  }

  void reject_unknown() {
    if (!obj_.is_object()) {
      return;
    }
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) {
        errors_.push_back("unknown key '" + (path_.empty() ? key : path_ + "." + key) + "'");
      }
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

template <typename Fn>
void section(Reader& parent, const char* key, std::vector<std::string>& errors, Fn fn) {
  if (const json* node = parent.child(key)) {
    Reader r(*node, key, errors);
    fn(r);
    r.reject_unknown();
  }
}

json scenario_json(const Scenario& s) {
  const SimConfig& c = s.base;
  json j;
  j["duration_s"] = c.duration_s;
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["densities"] = s.densities;
  std::vector<std::string> names;
  for (const auto& sch : s.schedulers) {
    names.push_back(sch.name());
  }
  j["schedulers"] = names;
  j["grid"] = {{"subframe_duration_ms", c.grid.subframe_duration_ms},
               {"subchannels", c.grid.subchannels},
               {"subchannels_per_tb", c.grid.subchannels_per_tb},
               {"bandwidth_hz", c.grid.bandwidth_hz},
               {"carrier_frequency_hz", c.grid.carrier_frequency_hz}};
  j["radio"] = {{"tx_power_dbm", c.radio.tx_power_dbm},
                {"noise_figure_db", c.radio.noise_figure_db},
                {"sinr_threshold_db", c.radio.sinr_threshold_db},
                {"comm_range_m", c.radio.comm_range_m},
                {"shadowing_std_db", c.radio.shadowing_std_db}};
  j["mobility"] = {{"road_length_m", c.mobility.road_length_m},
                   {"lane_count", c.mobility.lane_count},
                   {"lane_width_m", c.mobility.lane_width_m},
                   {"v_avg", c.mobility.v_avg},
                   {"v_std", c.mobility.v_std},
                   {"entry_span_s", c.mobility.entry_span_s}};
  json rc = json::object();
  for (const auto& [rri, bounds] : c.sps.rc_range) {
    rc[std::to_string(rri)] = {bounds.first, bounds.second};
  }
  j["sps"] = {{"t1", c.sps.t1},
              {"t2", c.sps.t2},
              {"p_min_dbm", c.sps.p_min_dbm},
              {"p_step_db", c.sps.p_step_db},
              {"keep_fraction", c.sps.keep_fraction},
              {"p_r", c.sps.p_r},
              {"sensing_window", c.sps.sensing_window},
              {"rc_range", rc}};
  j["sps_pp"] = {{"rri_min_ms", c.sps_pp.rri_min_ms},
                 {"rri_max_ms", c.sps_pp.rri_max_ms},
                 {"delta_ms", c.sps_pp.delta_ms},
                 {"reservation_span_ms", c.sps_pp.reservation_span_ms},
                 {"p_min_dbm", c.sps_pp.p_min_dbm},
                 {"p_step_db", c.sps_pp.p_step_db},
                 {"keep_fraction", c.sps_pp.keep_fraction},
                 {"sensing_window", c.sps_pp.sensing_window},
                 {"restart_after_raise", c.sps_pp.restart_after_raise}};
  j["risk"] = {{"deceleration", c.risk.deceleration},
               {"t_react_s", c.risk.t_react_s},
               {"e_track_th_m", c.risk.e_track_th_m},
               {"s_uv_floor", c.risk.s_uv_floor}};
  j["metrics"] = {{"sample_interval_ms", c.sample_interval_ms}};
  return j;
}

void read_rc_range(const json& node, RcRanges& out, std::vector<std::string>& errors) {
  if (!node.is_object()) {
    errors.push_back("sps.rc_range: expected an object of \"<rri>\": [lo, hi]");
    return;
  }
  RcRanges parsed;
  for (const auto& [key, value] : node.items()) {
    const std::string where = "sps.rc_range." + key;
    if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos ||
        key.size() > 6) {
      errors.push_back(where + ": key must be an RRI in ms");
      continue;
    }
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
        !value[1].is_number_integer()) {
      errors.push_back(where + ": expected [lo, hi] integers");
      continue;
    }
    parsed[std::stoi(key)] = {value[0].get<int>(), value[1].get<int>()};
  }
  out = std::move(parsed);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations, "; ")), violations_(std::move(violations)) {}

SimConfig Scenario::config_for(const SchedulerSpec& scheduler, int density) const {
  SimConfig c = base;
  c.scheduler = scheduler;
  c.mobility.density = density;
  return c;
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }

  Scenario s;
  SimConfig& c = s.base;
  std::vector<std::string> errors;
  Reader top(doc, "", errors);
  if (!doc.is_object()) {
    throw ConfigError(std::move(errors));
  }
  top.get("duration_s", c.duration_s);
  top.get("trials", c.trials);
  top.get("base_seed", c.base_seed);
  top.get("densities", s.densities);
  if (const json* node = top.child("schedulers")) {
    if (!node->is_array()) {
      errors.push_back("schedulers: expected an array of names");
    } else {
      s.schedulers.clear();
      for (const auto& item : *node) {
        if (!item.is_string()) {
          errors.push_back("schedulers: expected names such as \"sps100\" or \"spspp\"");
          continue;
        }
        try {
          s.schedulers.push_back(SchedulerSpec::parse(item.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          errors.push_back(std::string("schedulers: ") + e.what());
        }
      }
    }
  }
  section(top, "grid", errors, [&](Reader& r) {
    r.get("subframe_duration_ms", c.grid.subframe_duration_ms);
    r.get("subchannels", c.grid.subchannels);
    r.get("subchannels_per_tb", c.grid.subchannels_per_tb);
    r.get("bandwidth_hz", c.grid.bandwidth_hz);
    r.get("carrier_frequency_hz", c.grid.carrier_frequency_hz);
  });
  section(top, "radio", errors, [&](Reader& r) {
    r.get("tx_power_dbm", c.radio.tx_power_dbm);
    r.get("noise_figure_db", c.radio.noise_figure_db);
    r.get("sinr_threshold_db", c.radio.sinr_threshold_db);
    r.get("comm_range_m", c.radio.comm_range_m);
    r.get("shadowing_std_db", c.radio.shadowing_std_db);
  });
  section(top, "mobility", errors, [&](Reader& r) {
    r.get("road_length_m", c.mobility.road_length_m);
    r.get("lane_count", c.mobility.lane_count);
    r.get("lane_width_m", c.mobility.lane_width_m);
    r.get("v_avg", c.mobility.v_avg);
    r.get("v_std", c.mobility.v_std);
    r.get("entry_span_s", c.mobility.entry_span_s);
  });
  section(top, "sps", errors, [&](Reader& r) {
    r.get("t1", c.sps.t1);
    r.get("t2", c.sps.t2);
    r.get("p_min_dbm", c.sps.p_min_dbm);
    r.get("p_step_db", c.sps.p_step_db);
    r.get("keep_fraction", c.sps.keep_fraction);
    r.get("p_r", c.sps.p_r);
    r.get("sensing_window", c.sps.sensing_window);
    if (const json* rc = r.child("rc_range")) {
      read_rc_range(*rc, c.sps.rc_range, errors);
    }
  });
  section(top, "sps_pp", errors, [&](Reader& r) {
    r.get("rri_min_ms", c.sps_pp.rri_min_ms);
    r.get("rri_max_ms", c.sps_pp.rri_max_ms);
    r.get("delta_ms", c.sps_pp.delta_ms);
    r.get("reservation_span_ms", c.sps_pp.reservation_span_ms);
    r.get("p_min_dbm", c.sps_pp.p_min_dbm);
    r.get("p_step_db", c.sps_pp.p_step_db);
    r.get("keep_fraction", c.sps_pp.keep_fraction);
    r.get("sensing_window", c.sps_pp.sensing_window);
    r.get("restart_after_raise", c.sps_pp.restart_after_raise);
  });
  section(top, "risk", errors, [&](Reader& r) {
    r.get("deceleration", c.risk.deceleration);
    r.get("t_react_s", c.risk.t_react_s);
    r.get("e_track_th_m", c.risk.e_track_th_m);
    r.get("s_uv_floor", c.risk.s_uv_floor);
  });
  section(top, "metrics", errors,
          [&](Reader& r) { r.get("sample_interval_ms", c.sample_interval_ms); });
  top.reject_unknown();

  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError({"cannot read scenario file '" + path.string() + "'"});
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::vector<std::string> validate(const Scenario& scenario) {
  std::vector<std::string> errors;
  if (scenario.densities.empty()) {
    errors.push_back("densities: at least one density is required");
  }
  if (scenario.schedulers.empty()) {
    errors.push_back("schedulers: at least one scheduler is required");
  }
  std::set<int> seen_density;
  for (int d : scenario.densities) {
    if (!seen_density.insert(d).second) {
      errors.push_back("densities: duplicate density " + std::to_string(d));
    }
  }
  std::set<std::string> seen_sched;
  for (const auto& sch : scenario.schedulers) {
    if (!seen_sched.insert(sch.name()).second) {
      errors.push_back("schedulers: duplicate scheduler " + sch.name());
    }
  }
  // Check every scheduler/density combination; messages are deduplicated.
  std::set<std::string> reported;
  auto note = [&](const std::string& msg) {
    if (reported.insert(msg).second) {
      errors.push_back(msg);
    }
  };
  const std::vector<SchedulerSpec> schedulers =
      scenario.schedulers.empty() ? std::vector<SchedulerSpec>{SchedulerSpec::adaptive()}
                                  : scenario.schedulers;
  const std::vector<int> densities =
      scenario.densities.empty() ? std::vector<int>{scenario.base.mobility.density}
                                 : scenario.densities;
  for (const auto& sch : schedulers) {
    for (int d : densities) {
      const SimConfig c = scenario.config_for(sch, d);
      try {
        c.validate();
      } catch (const std::exception& e) {
        note(sch.name() + ": " + e.what());
      }
      try {
        c.mobility.validate();
      } catch (const std::exception& e) {
        note("density " + std::to_string(d) + ": " + e.what());
      }
    }
  }
  return errors;
}

std::string to_json(const Scenario& scenario) { return scenario_json(scenario).dump(2) + "\n"; }

std::string run_file_name(const std::string& scheduler, int density, int trial) {
  return scheduler + "_" + std::to_string(density) + "_" + std::to_string(trial) + ".csv";
}

void write_run_csv(std::ostream& os, const RunRecord& record) {
  os << "# schema=" << kSchemaVersion << "\n";
  os << "time_s,active,transmissions,tracking_error_sum,tracking_error_count,risky,safe,"
        "untracked_risky,untracked_safe,mean_rri_ms,pdr_running\n";
  for (const auto& s : record.samples) {
    os << num(s.time_s) << ',' << s.active << ',' << s.transmissions << ','
       << num(s.tracking_error_sum) << ',' << s.tracking_error_count << ',' << s.risk.risky << ','
       << s.risk.safe << ',' << s.risk.untracked_risky << ',' << s.risk.untracked_safe << ','
       << num(s.mean_rri_ms) << ',' << num(s.pdr_running) << '\n';
  }
}

RunRecord read_run_csv(std::istream& is, double duration_s) {
  std::string line;
  if (!std::getline(is, line) || line != "# schema=" + std::to_string(kSchemaVersion)) {
    throw std::runtime_error("run CSV: missing or unsupported schema line");
  }
  if (!std::getline(is, line)) {
    throw std::runtime_error("run CSV: missing header row");
  }
  RunRecord record;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
      cells.emplace_back();
    }
    if (cells.size() != 11) {
      throw std::runtime_error("run CSV: expected 11 columns, got " + std::to_string(cells.size()));
    }
    TickSample s;
    s.time_s = std::stod(cells[0]);
    s.active = std::stoi(cells[1]);
    s.transmissions = std::stoll(cells[2]);
    s.tracking_error_sum = std::stod(cells[3]);
    s.tracking_error_count = std::stoll(cells[4]);
    s.risk.risky = std::stoll(cells[5]);
    s.risk.safe = std::stoll(cells[6]);
    s.risk.untracked_risky = std::stoll(cells[7]);
    s.risk.untracked_safe = std::stoll(cells[8]);
    s.mean_rri_ms = std::stod(cells[9]);
    if (!cells[10].empty()) {
      s.pdr_running = std::stod(cells[10]);
    }
    record.samples.push_back(s);
  }
  finalize_aggregates(record, duration_s);
  return record;
}

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Mean and sample standard deviation over the trials that define the value.
Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) {
    return m;
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) {
      ss += (x - m.mean) * (x - m.mean);
    }
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

}  // namespace

SummaryRow summarize(const std::string& scheduler, int density,
                     const std::vector<RunRecord>& trials) {
  SummaryRow row;
  row.scheduler = scheduler;
  row.density = density;
  row.trials = static_cast<int>(trials.size());
  std::vector<double> te;
  std::vector<double> risk;
  std::vector<double> pdr;
  std::vector<double> rri;
  std::vector<double> untracked;
  for (const auto& r : trials) {
    if (r.mean_tracking_error) te.push_back(*r.mean_tracking_error);
    if (r.collision_risk_ratio) risk.push_back(*r.collision_risk_ratio);
    if (r.pdr) pdr.push_back(*r.pdr);
    if (r.mean_rri_ms) rri.push_back(*r.mean_rri_ms);
    if (r.risk.instances() > 0) {
      untracked.push_back(static_cast<double>(r.risk.untracked_risky + r.risk.untracked_safe) /
                          static_cast<double>(r.risk.instances()));
    }
  }
  const Moments m_te = moments(te);
  const Moments m_risk = moments(risk);
  const Moments m_pdr = moments(pdr);
  const Moments m_rri = moments(rri);
  row.tracking_error_mean = m_te.mean;
  row.tracking_error_std = m_te.std;
  row.risk_ratio_mean = m_risk.mean;
  row.risk_ratio_std = m_risk.std;
  row.pdr_mean = m_pdr.mean;
  row.pdr_std = m_pdr.std;
  row.mean_rri_mean = m_rri.mean;
  row.mean_rri_std = m_rri.std;
  row.untracked_fraction_mean = moments(untracked).mean;
  return row;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "# schema=" << kSchemaVersion << "\n";
  os << "scheduler,density,trials,tracking_error_mean,tracking_error_std,risk_ratio_mean,"
        "risk_ratio_std,pdr_mean,pdr_std,mean_rri_ms_mean,mean_rri_ms_std,"
        "untracked_fraction_mean\n";
  for (const auto& r : rows) {
    os << r.scheduler << ',' << r.density << ',' << r.trials << ',' << num(r.tracking_error_mean)
       << ',' << num(r.tracking_error_std) << ',' << num(r.risk_ratio_mean) << ','
       << num(r.risk_ratio_std) << ',' << num(r.pdr_mean) << ',' << num(r.pdr_std) << ','
       << num(r.mean_rri_mean) << ',' << num(r.mean_rri_std) << ','
       << num(r.untracked_fraction_mean) << '\n';
  }
}

namespace {

struct Job {
  std::size_t scheduler = 0;
  std::size_t density = 0;
  int trial = 0;
};

class OutputSet {
 public:
  void add(const fs::path& p) {
    std::lock_guard lock(mu_);
    files_.push_back(p);
  }
  void remove_all() {
    std::lock_guard lock(mu_);
    std::error_code ec;
    for (const auto& p : files_) {
      fs::remove(p, ec);
    }
    files_.clear();
  }

 private:
  std::mutex mu_;
  std::vector<fs::path> files_;
};

void write_file(const fs::path& path, OutputSet& outputs, const std::function<void(std::ostream&)>& body) {
  outputs.add(path);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  body(os);
  os.flush();
  if (!os) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

}  // namespace

std::vector<SummaryRow> run_sweep(const Scenario& scenario, const SweepOptions& options,
                                  std::ostream& log) {
  const std::vector<std::string> violations = validate(scenario);
  if (!violations.empty()) {
    throw ConfigError(violations);
  }
  const fs::path runs_dir = options.out_dir / "runs";
  std::error_code ec;
  fs::create_directories(runs_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create '" + runs_dir.string() + "': " + ec.message());
  }

  std::vector<Job> jobs;
  for (std::size_t s = 0; s < scenario.schedulers.size(); ++s) {
    for (std::size_t d = 0; d < scenario.densities.size(); ++d) {
      for (int t = 0; t < scenario.base.trials; ++t) {
        jobs.push_back({s, d, t});
      }
    }
  }
  const std::size_t ns = scenario.schedulers.size();
  const std::size_t nd = scenario.densities.size();
  const auto trials = static_cast<std::size_t>(scenario.base.trials);
  // results[(s * nd + d) * trials + t]; each slot is written by one worker.
  std::vector<RunRecord> results(jobs.size());

  OutputSet outputs;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::mutex log_mu;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) {
        return;
      }
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) {
        return;
      }
      const Job& job = jobs[k];
      try {
        const SchedulerSpec& sch = scenario.schedulers[job.scheduler];
        const int density = scenario.densities[job.density];
        RunRecord rec = run(scenario.config_for(sch, density), job.trial);
        write_file(runs_dir / run_file_name(sch.name(), density, job.trial), outputs,
                   [&](std::ostream& os) { write_run_csv(os, rec); });
        {
          std::lock_guard lock(log_mu);
          log << "run " << sch.name() << " density=" << density << " trial=" << job.trial
              << " risk=" << num(rec.collision_risk_ratio) << " pdr=" << num(rec.pdr) << "\n";
        }
        results[(job.scheduler * nd + job.density) * trials + static_cast<std::size_t>(job.trial)] =
            std::move(rec);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) {
          error = std::current_exception();
        }
        failed.store(true);
        return;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) {
    th.join();
  }

  try {
    if (error) {
      std::rethrow_exception(error);
    }

    std::vector<SummaryRow> rows;
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t d = 0; d < nd; ++d) {
        const auto first = results.begin() + static_cast<std::ptrdiff_t>((s * nd + d) * trials);
        rows.push_back(summarize(scenario.schedulers[s].name(), scenario.densities[d],
                                 std::vector<RunRecord>(first, first + static_cast<std::ptrdiff_t>(trials))));
      }
    }

    write_file(options.out_dir / "rri_timeseries.csv", outputs, [&](std::ostream& os) {
      os << "# schema=" << kSchemaVersion << "\n";
      os << "scheduler,density,time_s,mean_rri_ms\n";
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t d = 0; d < nd; ++d) {
          const std::size_t base = (s * nd + d) * trials;
          const std::size_t n_samples = results[base].samples.size();
          for (std::size_t k = 0; k < n_samples; ++k) {
            // Mean over trials whose vehicles already hold reservations.
            double sum = 0.0;
            int count = 0;
            for (std::size_t t = 0; t < trials; ++t) {
              const double v = results[base + t].samples[k].mean_rri_ms;
              if (v > 0.0) {
                sum += v;
                ++count;
              }
            }
            os << scenario.schedulers[s].name() << ',' << scenario.densities[d] << ','
               << num(results[base].samples[k].time_s) << ',' << num(count ? sum / count : 0.0)
               << '\n';
          }
        }
      }
    });

    write_file(options.out_dir / "rri_hist.csv", outputs, [&](std::ostream& os) {
      os << "# schema=" << kSchemaVersion << "\n";
      os << "scheduler,density,rri_ms,count,fraction\n";
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t d = 0; d < nd; ++d) {
          std::map<int, std::int64_t> hist;
          std::int64_t total = 0;
          for (std::size_t t = 0; t < trials; ++t) {
            for (const auto& [rri, cnt] : results[(s * nd + d) * trials + t].rri_histogram) {
              hist[rri] += cnt;
              total += cnt;
            }
          }
          for (const auto& [rri, cnt] : hist) {
            os << scenario.schedulers[s].name() << ',' << scenario.densities[d] << ',' << rri << ','
               << cnt << ',' << num(static_cast<double>(cnt) / static_cast<double>(total)) << '\n';
          }
        }
      }
    });

    write_file(options.out_dir / "summary.csv", outputs,
               [&](std::ostream& os) { write_summary_csv(os, rows); });
    return rows;
  } catch (...) {
    outputs.remove_all();
    throw;
  }
}

void print_table1(std::ostream& os, const std::vector<int>& clusters) {
  analytic::ClusterScenario sc;
  sc.clusters = clusters;
  sc.validate();
  const int rris[] = {20, 50, 100};
  const analytic::AdaptiveResult adaptive = analytic::adaptive_occupancy(sc, 20, 100, 10);

  std::ostringstream clusters_text;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    clusters_text << (i ? "," : "") << clusters[i];
  }
  os << "clusters: {" << clusters_text.str() << "}\n";
  os << std::left << std::setw(22) << "metric" << std::right;
  for (int r : rris) {
    os << std::setw(10) << (std::to_string(r) + " ms");
  }
  os << std::setw(10) << "adaptive" << "\n";

  os << std::fixed;
  os << std::left << std::setw(22) << "occupancy_percent" << std::right << std::setprecision(2);
  for (int r : rris) {
    os << std::setw(10) << analytic::occupancy(sc, r);
  }
  os << std::setw(10) << adaptive.occupancy_percent << "\n";

  os << std::left << std::setw(22) << "success_probability" << std::right << std::setprecision(4);
  for (int r : rris) {
    os << std::setw(10) << analytic::success_probability(sc, r);
  }
  os << std::setw(10) << adaptive.success_probability << "\n";

  os << std::left << std::setw(22) << "adaptive_rri_ms" << std::right;
  for (std::size_t i = 0; i < adaptive.chosen_rri_ms.size(); ++i) {
    os << (i ? "," : "") << adaptive.chosen_rri_ms[i];
  }
  os << (adaptive.saturated ? "  (saturated)" : "") << "\n";
  os.unsetf(std::ios::fixed);
}

}  // namespace v2x::harness
