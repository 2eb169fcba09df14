#include <doctest.h>

#include <random>
#include <stdexcept>

#include "v2x/safety_metrics.hpp"

using namespace v2x;

TEST_CASE("tracking error") {
  const Bsm still{0, 1.0, 250.0, 0.0, 190};
  CHECK(*tracking_error(250.0, &still, 2000.0) == 0.0);
  // 100 ms at 19.44 m/s, nothing lost
  const Bsm old{0, 0.9, 100.0, 19.44, 190};
  CHECK(*tracking_error(100.0 + 19.44 * 0.1, &old, 2000.0) == doctest::Approx(1.944));
  const Bsm across{0, 0.0, 1.0, 19.44, 190};
  CHECK(*tracking_error(1999.0, &across, 2000.0) == doctest::Approx(2.0));
  CHECK_FALSE(tracking_error(5.0, nullptr, 2000.0).has_value());
}

TEST_CASE("estimated and true TTC") {
  const RiskConfig cfg;
  CHECK(*estimated_ttc(40.0, 40.0, 10.0, cfg, 2000.0) == 0.0);
  CHECK(*estimated_ttc(100.0, 0.0, 20.0, cfg, 2000.0) == doctest::Approx(5.0));
  CHECK(*estimated_ttc(100.0, 0.0, 40.0, cfg, 2000.0) == doctest::Approx(2.5));
  CHECK(*true_ttc(1950.0, 50.0, 20.0, cfg, 2000.0) == doctest::Approx(5.0));
  CHECK_FALSE(estimated_ttc(100.0, 0.0, 0.05, cfg, 2000.0).has_value());
  CHECK_FALSE(true_ttc(100.0, 0.0, 0.0, cfg, 2000.0).has_value());
}

TEST_CASE("TTC threshold") {
  const RiskConfig cfg;
  CHECK(ttc_threshold(0.0, cfg) == doctest::Approx(1.0));
  CHECK(ttc_threshold(19.44, cfg) == doctest::Approx(5.226087).epsilon(1e-6));
  CHECK(ttc_threshold(4.6, cfg) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ttc_threshold(-1.0, cfg), std::invalid_argument);
}

TEST_CASE("collision risk") {
  const RiskConfig cfg;
  CHECK(collision_risk(PairSample{0.0, 1.0, 10.0, 19.44}, cfg) == 0);
  CHECK(collision_risk(PairSample{2.0, 3.0, 10.0, 19.44}, cfg) == 1);
  CHECK(collision_risk(PairSample{2.0, 10.0, 10.0, 19.44}, cfg) == 0);
  CHECK(collision_risk(PairSample{0.5, 3.0, 10.0, 19.44}, cfg) == 0);  // not above the threshold
  // untracked pairs are risky inside the TTC threshold
  CHECK(collision_risk(PairSample{std::nullopt, 3.0, 10.0, 19.44}, cfg) == 1);
  CHECK(collision_risk(PairSample{std::nullopt, 8.0, 10.0, 19.44}, cfg) == 0);
}

TEST_CASE("collision risk is monotone in the tracking error") {
  const RiskConfig cfg;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    PairSample p{2.0 * u(rng), 10.0 * u(rng), 0.1 + 30.0 * u(rng), 30.0 * u(rng)};
    const int before = collision_risk(p, cfg);
    p.e_track = *p.e_track + u(rng);
    CHECK(collision_risk(p, cfg) >= before);
  }
}

TEST_CASE("risk ratio") {
  CHECK_FALSE(collision_risk_ratio(std::vector<int>{}).has_value());
  CHECK(*collision_risk_ratio(std::vector<int>{0, 0, 0}) == 0.0);
  CHECK(*collision_risk_ratio(std::vector<int>{1, 1}) == 1.0);

  // three vehicles, 10 instances over a short trace, two of them risky
  const RiskConfig cfg;
  RiskTally tally;
  const PairSample risky{2.0, 3.0, 10.0, 19.44};
  const PairSample calm{0.1, 3.0, 10.0, 19.44};
  const PairSample far{2.0, 20.0, 10.0, 19.44};
  for (int i = 0; i < 2; ++i) tally.add(risky, cfg);
  for (int i = 0; i < 5; ++i) tally.add(calm, cfg);
  for (int i = 0; i < 3; ++i) tally.add(far, cfg);
  CHECK(tally.instances() == 10);
  CHECK(*collision_risk_ratio(tally) == doctest::Approx(0.2));

  RiskTally more;
  more.add(PairSample{std::nullopt, 3.0, 10.0, 19.44}, cfg);
  more.add(PairSample{std::nullopt, 30.0, 10.0, 19.44}, cfg);
  tally += more;
  CHECK(tally.untracked_risky == 1);
  CHECK(tally.untracked_safe == 1);
  CHECK(*collision_risk_ratio(tally) == doctest::Approx(3.0 / 12.0));
  CHECK_FALSE(collision_risk_ratio(RiskTally{}).has_value());
}

TEST_CASE("neighbor table keeps the freshest BSM") {
  NeighborTable t(3);
  CHECK(t.latest(0, 1) == nullptr);
  t.update(0, Bsm{1, 0.5, 10.0, 1.0, 190});
  t.update(0, Bsm{1, 0.3, 99.0, 1.0, 190});
  REQUIRE(t.latest(0, 1) != nullptr);
  CHECK(t.latest(0, 1)->generation_time_s == 0.5);
  t.update(0, Bsm{1, 0.7, 12.0, 1.0, 190});
  CHECK(t.latest(0, 1)->x == 12.0);
  CHECK(t.latest(1, 0) == nullptr);
}

TEST_CASE("PDR ledger") {
  PdrLedger l(3);
  CHECK_FALSE(l.scenario_pdr().has_value());
  // 10 transmissions to 3 in-range receivers each, 24 delivered
  int delivered = 0;
  for (int tx = 0; tx < 10; ++tx) {
    for (int r = 0; r < 3; ++r) {
      const bool ok = delivered < 24;
      delivered += ok ? 1 : 0;
      l.record(0, ok);
    }
  }
  CHECK(l.opportunities(0) == 30);
  CHECK(l.deliveries(0) == 24);
  CHECK(*l.vehicle_pdr(0) == doctest::Approx(0.8));
  CHECK(*l.scenario_pdr() == doctest::Approx(0.8));  // vehicles without opportunities excluded
  l.record(1, false);
  CHECK(*l.scenario_pdr() == doctest::Approx(0.4));
  CHECK_FALSE(l.vehicle_pdr(2).has_value());
}

TEST_CASE("risk config validation") {
  RiskConfig c;
  CHECK_NOTHROW(c.validate());
  c.deceleration = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RiskConfig{};
  c.s_uv_floor = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
