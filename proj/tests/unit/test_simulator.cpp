#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gnutellab/simulator.hpp"

using namespace gnutellab;

TEST_SUITE("churn") {
  TEST_CASE("calibration hits both quantiles") {
    const ChurnModel m = calibrate_churn({4.0, 0.40}, {24.0, 0.75});
    CHECK(std::abs(m.cdf(4.0) - 0.40) < 1e-6);
    CHECK(std::abs(m.cdf(24.0) - 0.75) < 1e-6);
    // ln(-ln 0.25) - ln(-ln 0.6) over ln 6, solved by hand.
    const double k = (std::log(-std::log(0.25)) - std::log(-std::log(0.6))) / std::log(6.0);
    CHECK(m.shape == doctest::Approx(k).epsilon(1e-12));
    CHECK(std::abs(m.shape - 0.557) <= 0.001);
    CHECK(std::abs(m.scale_hours - 13.4) <= 0.1);
    CHECK(m.quantile(m.cdf(7.0)) == doctest::Approx(7.0));
  }

  TEST_CASE("exponential-compatible quantiles force shape 1") {
    CHECK(calibrate_churn({3.0, 0.5}, {6.0, 0.75}).shape == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("inverted quantiles are rejected") {
    CHECK_THROWS_AS(calibrate_churn({24.0, 0.75}, {4.0, 0.40}), InvalidArgument);
    CHECK_THROWS_AS(calibrate_churn({4.0, 0.75}, {24.0, 0.40}), InvalidArgument);
  }
}

TEST_SUITE("simulator") {
  TEST_CASE("static population pings once per period") {
    SimConfig cfg;
    cfg.target_population = 100;
    cfg.ping_period = 60.0;
    cfg.duration = 600.0;
    const SimReport r = run(cfg);
    CHECK(r.pings_originated.size() == 100);  // known hosts count toward the target
    for (auto [node, n] : r.pings_originated) CHECK(n == 10);
    CHECK(r.delivered + r.dropped_departed + r.expired == r.total_messages());
  }

  TEST_CASE("determinism") {
    SimConfig cfg = sim_preset("nov2000");
    cfg.target_population = 120;
    cfg.duration = 200.0;
    CHECK(run(cfg) == run(cfg));
    SimConfig other = cfg;
    other.seed = 2;
    CHECK_FALSE(run(cfg) == run(other));
  }

  TEST_CASE("a forked simulation matches the original") {
    SimConfig cfg = sim_preset("churn");
    cfg.target_population = 200;
    cfg.duration = 6 * 3600.0;
    Simulation a(cfg);
    a.advance_to(3600.0);
    Simulation b = a;
    CHECK(a.finish() == b.finish());
  }

  TEST_CASE("validation names the field") {
    SimConfig cfg;
    cfg.duration = -1.0;
    try {
      validate(cfg);
      FAIL("expected rejection");
    } catch (const InvalidArgument& e) {
      CHECK(std::string(e.what()).find("duration") != std::string::npos);
    }
    CHECK_THROWS_AS(sim_preset("none"), InvalidArgument);
  }

  TEST_CASE("single ping with no replies is all ping traffic") {
    SimReport r;
    r.traffic[std::size_t(MessageKind::Ping)] = {1, 23};
    const TrafficReport t = traffic_report(r);
    CHECK(t.messages(MessageKind::Ping) == 1.0);
    CHECK(t.bytes(MessageKind::Ping) == 1.0);
    CHECK_THROWS_AS(traffic_report(SimReport{}), InvalidArgument);
  }

  TEST_CASE("nov2000 traffic is mostly membership upkeep") {
    const TrafficReport t = traffic_report(run(sim_preset("nov2000")));
    CHECK(t.bytes(MessageKind::Ping) + t.bytes(MessageKind::Pong) >= 0.50);
  }

  TEST_CASE("kaplan-meier on hand-made sessions") {
    // Five observed sessions of 1, 2, 3, 5, 6 hours, the 3 h one censored.
    // S(4) = (4/5)(3/4)(1) = 0.6 by the product-limit formula.
    SimReport r;
    const double h = 3600.0;
    const double lengths[] = {1, 2, 3, 5, 6};
    for (int i = 0; i < 5; ++i) {
      SessionRecord s;
      s.node = NodeId(i);
      s.start = 0.0;
      s.end = lengths[i] * h;
      s.censored = (i == 2);
      r.sessions.push_back(s);
    }
    const SessionStats st = session_statistics(r, 4.0, 5.5);
    CHECK(st.fraction_shorter == doctest::Approx(0.4));
    // S(5.5) = 0.6 * (1 - 1/2) = 0.3
    CHECK(st.fraction_longer == doctest::Approx(0.3));
  }

  TEST_CASE("exported csvs") {
    SimConfig cfg;
    cfg.target_population = 30;
    cfg.duration = 120.0;
    cfg.snapshot_times = {60.0};
    cfg.connectivity_interval = 30.0;
    const SimReport r = run(cfg);
    REQUIRE(r.snapshots.size() == 1);
    CHECK(r.connectivity.size() == 3);  // at 30, 60 and 90 s
    const auto dir = std::filesystem::temp_directory_path() / "gnutellab_export";
    std::filesystem::remove_all(dir);
    export_report(r, dir);
    for (const char* f : {"traffic.csv", "links.csv", "sessions.csv", "connectivity.csv", "snapshot_60.graph"}) {
      CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
    }
    std::filesystem::remove_all(dir);
  }
}
