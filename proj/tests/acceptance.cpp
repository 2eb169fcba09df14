// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "v2x/analytic_model.hpp"
#include "v2x/harness.hpp"

using namespace v2x;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double round_to(double v, int decimals) {
  const double s = std::pow(10.0, decimals);
  return std::round(v * s) / s;
}

void table1() {
  const analytic::ClusterScenario s{{20, 50, 100}};
  std::ostringstream os;
  harness::print_table1(os, s.clusters);
  const std::string printed = os.str();
  const auto ad = analytic::adaptive_occupancy(s, 20, 100, 10);
  const double occ[] = {analytic::occupancy(s, 20), analytic::occupancy(s, 50),
                        analytic::occupancy(s, 100), ad.occupancy_percent};
  const double ps[] = {analytic::success_probability(s, 20), analytic::success_probability(s, 50),
                       analytic::success_probability(s, 100), ad.success_probability};
  const double want_occ[] = {379.41, 151.76, 75.88, 100.00};
  const double want_ps[] = {0.3529, 0.7059, 1.0, 1.0};
  bool ok = true;
  std::string detail = "occupancy";
  for (int i = 0; i < 4; ++i) {
    ok = ok && round_to(occ[i], 2) == want_occ[i];
    ok = ok && round_to(ps[i], 4) == want_ps[i];
    detail += " " + fmt("%.2f", occ[i]);
  }
  detail += ", success";
  for (double p : ps) {
    detail += " " + fmt("%.4f", p);
  }
  for (const char* token : {"379.41", "151.76", "75.88", "100.00", "0.3529", "0.7059", "1.0000"}) {
    ok = ok && printed.find(token) != std::string::npos;
  }
  report(ok, "table1", detail);
}

void rsrp_average() {
  constexpr int phases = 10;
  constexpr int subchannels = 2;
  constexpr int periods = 10;
  double worst = 0.0;
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const testing::RawWindow raw = testing::random_window(seed + 9000, phases * periods, subchannels, 0.6, 0.0);
    const SensingWindow w = raw.build();
    for (int p = 0; p < phases; ++p) {
      for (int j = 0; j < subchannels; ++j) {
        double sum = 0.0;
        for (int k = 0; k < periods; ++k) {
          sum += raw.cell(p + k * phases, j).rsrp_mw;
        }
        const double want = 10.0 * std::log10(sum / periods);
        const auto got = avg_rsrp(w, p, SubchannelGroup{j, 1}, phases);
        worst = std::max(worst, got ? std::abs(*got - want) : 1e300);
        ++compared;
      }
    }
  }
  report(worst <= 1e-9, "rsrp_average",
         std::to_string(compared) + " phase averages, max |error| " + fmt("%.3g", worst) + " dB");
}

void scheduler_invariants() {
  constexpr int selections = 10000;
  const int fixed_rris[] = {20, 50, 100};
  const SpsConfig sps;
  const SpsPpConfig pp;
  const auto ladder = pp.rri_ladder();
  int bad_a = 0;
  int bad_b = 0;
  int bad_c_sps = 0;
  int bad_c_pp = 0;
  int bad_d = 0;
  std::map<int, int> pp_rri;
  for (int i = 0; i < selections; ++i) {
    const auto raw = testing::random_window(static_cast<std::uint64_t>(i) + 1, 1000, 2,
                                            0.2 + 0.7 * ((i * 37) % 100) / 100.0, 0.002);
    const SensingWindow w = raw.build();
    Rng rng(static_cast<std::uint64_t>(i) * 7919 + 3);
    CandidateSet set;
    Selection sel;
    if (i % 2 == 0) {
      const int rri = fixed_rris[(i / 2) % 3];
      set = build_candidates(w, rri, {sps.t1, rri}, sps.exclusion(), 2);
      sel = select_resource(set, sps.keep_fraction, rng);
      const int rc = draw_rc(rri, rng);
      bad_c_sps += rc * rri >= 500 && rc * rri <= 1500 ? 0 : 1;
    } else {
      const AdaptiveSelection ad = adaptive_select(w, pp, 2, rng);
      set = ad.candidates;
      sel = ad.selection;
      ++pp_rri[ad.rri_ms];
      bad_c_pp += ad.rc * ad.rri_ms == pp.reservation_span_ms ? 0 : 1;
      bad_d += std::find(ladder.begin(), ladder.end(), ad.rri_ms) != ladder.end() ? 0 : 1;
    }
    std::set<Candidate> sa;
    for (const auto& c : set.admitted) {
      sa.insert(c.candidate);
    }
    const std::set<Candidate> sb(sel.shortlist.begin(), sel.shortlist.end());
    const bool subset = std::all_of(sb.begin(), sb.end(), [&](const Candidate& c) { return sa.contains(c); });
    bad_a += sb.contains(sel.chosen) && subset && sb.size() == sel.shortlist.size() ? 0 : 1;
    const auto need = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(set.total) - 1e-9));
    bad_b += sel.shortlist.size() == need ? 0 : 1;
  }
  std::string hist;
  for (const auto& [rri, n] : pp_rri) {
    hist += " " + std::to_string(rri) + ":" + std::to_string(n);
  }
  report(bad_a == 0, "invariant_a_membership",
         std::to_string(bad_a) + " violations over " + std::to_string(selections) + " selections");
  report(bad_b == 0, "invariant_b_shortlist_size", std::to_string(bad_b) + " violations");
  report(bad_c_sps == 0 && bad_c_pp == 0, "invariant_c_reservation_span",
         "SPS outside [500,1500] ms: " + std::to_string(bad_c_sps) +
             "; SPS++ RC*RRI != 500 ms: " + std::to_string(bad_c_pp) +
             " (RRIs not dividing 500 ms cannot meet it; SPS++ rri* counts:" + hist + ")");
  report(bad_d == 0, "invariant_d_ladder", std::to_string(bad_d) + " violations");
}

void oracle_equivalence() {
  int mismatches = 0;
  int compared = 0;
  for (int rri : {20, 50, 100}) {
    SpsPpConfig pp;
    pp.rri_min_ms = rri;
    pp.rri_max_ms = rri;
    SpsConfig sps;
    sps.rri_ms = rri;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SensingWindow w = testing::random_window(seed * 31 + 5, 1000, 2, 0.3 + 0.006 * seed).build();
      Rng a(seed);
      Rng b(seed);
      SchedulerState fixed;
      SchedulerState adaptive;
      reselect_sps(fixed, w, sps, 2, a);
      reselect_sps_pp(adaptive, w, pp, 2, b);
      mismatches += fixed.selected == adaptive.selected && fixed.p_th_dbm == adaptive.p_th_dbm ? 0 : 1;
      ++compared;
    }
  }
  report(mismatches == 0, "oracle_equivalence",
         std::to_string(mismatches) + " mismatches over " + std::to_string(compared) + " selections");
}

void load_response() {
  const int sizes[] = {10, 20, 60, 100};
  std::vector<double> means;
  std::string detail;
  for (int m : sizes) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SimConfig c;
      c.scheduler = SchedulerSpec::adaptive();
      c.duration_s = 4.0;
      c.mobility.density = m;
      c.base_seed = seed;
      RunHooks hooks;
      hooks.vehicles = testing::cluster(m, seed);
      sum += testing::mean_rri_after(run(c, 0, hooks), 3.0);
    }
    means.push_back(sum / 5.0);
    detail += " M=" + std::to_string(m) + ":" + fmt("%.1f", means.back());
  }
  const bool monotone = std::is_sorted(means.begin(), means.end());
  const bool ok = monotone && means.front() == 20.0 && means.back() >= 90.0;
  report(ok, "load_response", "mean converged rri* (ms)" + detail);
}

struct Outcome {
  double risk = 0.0;
  double te = 0.0;
  double pdr = 0.0;
};

Outcome average(SchedulerSpec sched, int density, int trials) {
  Outcome o;
  for (int t = 0; t < trials; ++t) {
    SimConfig c;
    c.scheduler = sched;
    c.mobility.density = density;
    c.duration_s = 8.0;
    const RunRecord r = run(c, t);
    o.risk += r.collision_risk_ratio.value_or(0.0) / trials;
    o.te += r.mean_tracking_error.value_or(0.0) / trials;
    o.pdr += r.pdr.value_or(0.0) / trials;
  }
  return o;
}

void safety_trend_and_pdr() {
  const SchedulerSpec fixed[] = {SchedulerSpec::fixed(20), SchedulerSpec::fixed(50),
                                 SchedulerSpec::fixed(100)};
  std::map<int, std::map<std::string, Outcome>> res;
  for (int density : {120, 160}) {
    for (const auto& s : fixed) {
      res[density][s.name()] = average(s, density, 3);
    }
    res[density]["spspp"] = average(SchedulerSpec::adaptive(), density, 3);
  }

  const auto& hi = res[160];
  double best_risk = 1e300;
  bool below_each = true;
  for (const auto& s : fixed) {
    best_risk = std::min(best_risk, hi.at(s.name()).risk);
    below_each = below_each && hi.at("spspp").risk < hi.at(s.name()).risk;
  }
  const double improvement = 1.0 - hi.at("spspp").risk / best_risk;
  std::string detail = "160 veh risk";
  for (const auto& [name, o] : hi) {
    detail += " " + name + "=" + fmt("%.4f", o.risk);
  }
  detail += ", improvement over best fixed " + fmt("%.1f", 100.0 * improvement) + "%";
  report(below_each && improvement >= 0.2, "safety_trend_risk", detail);

  bool te_ok = true;
  detail.clear();
  for (int density : {120, 160}) {
    double best_te = 1e300;
    for (const auto& s : fixed) {
      best_te = std::min(best_te, res[density][s.name()].te);
    }
    te_ok = te_ok && res[density]["spspp"].te <= best_te;
    detail += std::to_string(density) + " veh TE spspp=" + fmt("%.3f", res[density]["spspp"].te) +
              " m vs best fixed " + fmt("%.3f", best_te) + " m; ";
  }
  report(te_ok, "safety_trend_tracking_error", detail);

  // two vehicles in range of each other and nobody else
  bool pair_ok = true;
  std::string pair_detail;
  for (const auto& s : {SchedulerSpec::fixed(20), SchedulerSpec::fixed(100), SchedulerSpec::adaptive()}) {
    SimConfig c;
    c.scheduler = s;
    c.mobility.density = 2;
    c.duration_s = 8.0;
    RunHooks hooks;
    hooks.vehicles = std::vector<VehicleState>{VehicleState{0, 0, 100.0, 20.0, 0.0},
                                               VehicleState{1, 3, 150.0, -16.0, 0.3}};
    const RunRecord r = run(c, 0, hooks);
    pair_ok = pair_ok && r.pdr && *r.pdr == 1.0;
    pair_detail += s.name() + "=" + fmt("%.6f", r.pdr.value_or(-1.0)) + " ";
  }
  const double pdr20 = hi.at("sps20").pdr;
  const double pdr100 = hi.at("sps100").pdr;
  report(pair_ok && pdr100 > pdr20, "pdr_sanity",
         "two-vehicle PDR " + pair_detail + "; 160 veh PDR sps100=" + fmt("%.4f", pdr100) +
             " sps20=" + fmt("%.4f", pdr20));
}

void triangle_bound() {
  SimConfig c;
  c.scheduler = SchedulerSpec::adaptive();
  c.mobility.density = 40;
  RunHooks hooks;
  std::int64_t pairs = 0;
  std::int64_t violations = 0;
  hooks.on_pair = [&](const PairObservation& o) {
    if (!o.estimated_ttc || !o.sample.e_track) {
      return;
    }
    ++pairs;
    const double gap = std::abs(*o.estimated_ttc - o.sample.true_ttc);
    violations += gap <= *o.sample.e_track / o.s_uv + 1e-9 ? 0 : 1;
  };
  run(c, 0, hooks);
  report(pairs > 0 && violations == 0, "ttc_triangle_bound",
         std::to_string(violations) + " violations over " + std::to_string(pairs) + " sampled pairs");
}

void ttc_threshold_value() {
  const double v = ttc_threshold(19.44, RiskConfig{});
  const double closed_form = 1.0 + 19.44 / 4.6;
  report(std::abs(v - closed_form) <= 1e-6 && round_to(v, 3) == 5.226, "ttc_threshold",
         "ttc_threshold(19.44) = " + fmt("%.9f", v) + " s");
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      out[fs::relative(e.path(), root).generic_string()] = s.str();
    }
  }
  return out;
}

void determinism() {
  harness::Scenario s = harness::parse_scenario(R"({"duration_s": 2, "trials": 2, "densities": [40, 80]})");
  const fs::path base = fs::temp_directory_path() / "v2x_acceptance_determinism";
  fs::remove_all(base);
  std::ostringstream log;
  harness::run_sweep(s, {base / "a", 1}, log);
  harness::run_sweep(s, {base / "b", 1}, log);
  const auto a = read_tree(base / "a");
  const auto b = read_tree(base / "b");
  fs::remove_all(base);
  report(!a.empty() && a == b, "determinism",
         std::to_string(a.size()) + " CSV files compared byte for byte");
}

}  // namespace

int main() {
  table1();
  rsrp_average();
  scheduler_invariants();
  oracle_equivalence();
  load_response();
  safety_trend_and_pdr();
  triangle_bound();
  ttc_threshold_value();
  determinism();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
