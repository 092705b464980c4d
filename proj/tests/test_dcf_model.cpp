#include <doctest.h>

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

#include "dqwifi/dcf_model.hpp"
#include "dqwifi/params_io.hpp"

using namespace dqwifi;

namespace {

Station station(int id, int retry, int backoff, double rate = 1.0, int size = 1023) {
  Station s;
  s.id = id;
  s.retry = retry;
  s.backoff = backoff;
  s.data_rate = rate;
  s.packet_size = size;
  return s;
}

SystemState state_of(std::vector<Station> stations) {
  SystemState s;
  s.stations = std::move(stations);
  s.elapsed = 128;
  return s;
}

}  // namespace

TEST_SUITE("dcf_model") {

TEST_CASE("window sizes") {
  const WifiParams p = bianchi_80211b();
  CHECK(window(p, 0) == 16);
  CHECK(window(p, 5) == 512);
  CHECK(window(p, 6) == 1024);
  CHECK_THROWS_AS(window(p, 7), std::out_of_range);
  CHECK_THROWS_AS(window(p, -1), std::out_of_range);

  WifiParams capped = p;
  capped.cw_max = 255;
  CHECK(window(capped, 4) == 256);
  CHECK(window(capped, 6) == 256);
  for (int r = 1; r <= p.max_retries; ++r) CHECK(window(p, r) >= window(p, r - 1));
}

TEST_CASE("back-off draws are uniform over the window") {
  const WifiParams p = bianchi_80211b();
  Rng rng(17);
  std::map<int, int> counts;
  const int draws = 160000;
  for (int i = 0; i < draws; ++i) ++counts[draw_backoff(p, 0, rng)];
  REQUIRE(counts.size() == 16);
  CHECK(counts.begin()->first == 0);
  CHECK(counts.rbegin()->first == 15);
  // 10000 expected per value, sd about 97
  for (const auto& [v, c] : counts) CHECK(std::abs(c - 10000) < 500);

  int lo = 1 << 30, hi = -1;
  for (int i = 0; i < 50000; ++i) {
    const int b = draw_backoff(p, 6, rng);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  CHECK(lo == 0);
  CHECK(hi == 1023);

  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(draw_backoff(p, 2, a) == draw_backoff(p, 2, b));
}

TEST_CASE("classify") {
  SystemState s = state_of({station(0, 0, 3), station(1, 0, 5)});
  CHECK(classify(s).kind == TransitionKind::Decrement);

  s = state_of({station(0, 0, 0), station(1, 0, 4)});
  Transition t = classify(s);
  CHECK(t.kind == TransitionKind::Success);
  CHECK(t.stations == std::vector<int>{0});

  s = state_of({station(0, 0, 0), station(1, 0, 0), station(2, 0, 7)});
  t = classify(s);
  CHECK(t.kind == TransitionKind::Collision);
  CHECK(t.stations == std::vector<int>{0, 1});

  // retry counters do not matter
  s = state_of({station(0, 3, 0), station(1, 5, 2)});
  CHECK(classify(s).kind == TransitionKind::Success);

  s.stations[0].active = false;
  s.stations[1].active = false;
  CHECK_THROWS_AS(classify(s), std::invalid_argument);
}

TEST_CASE("frame and exchange durations, 802.11b") {
  const WifiParams p = bianchi_80211b();
  const Station s = station(0, 0, 0);
  CHECK(t_frame(p, s) == 8584.0);
  CHECK(t_ack(p, s) == 240.0);
  CHECK(t_success(p, s) == 8980.0);
  CHECK(t_success(p, s) > t_frame(p, s));
  CHECK(t_frame(p, station(0, 0, 0, 1.0, 0)) == 128.0 + 272.0);

  const Station fast = station(0, 0, 0, 2.0);
  CHECK(t_frame(p, fast) - p.phy_header == (t_frame(p, s) - p.phy_header) / 2);

  WifiParams rts = p;
  rts.rts_cts_enabled = true;
  CHECK(t_success(rts, s) - t_success(p, s) == 584.0);

  const std::vector<Station> pair{station(0, 0, 0), station(1, 0, 0)};
  CHECK(t_collision(p, pair) == t_success(p, s));
  CHECK(t_collision(rts, pair) == 288.0 + 28.0 + 240.0 + 128.0);

  const std::vector<Station> small{station(0, 0, 0, 1.0, 100), station(1, 0, 0, 1.0, 100)};
  CHECK(t_collision(rts, small) == t_collision(rts, pair));

  CHECK_THROWS_AS(t_collision(p, std::vector<Station>{s}), std::invalid_argument);
}

TEST_CASE("collision lasts as long as the slowest frame") {
  const WifiParams p = bianchi_80211b();
  const Station slow = station(0, 0, 0, 1.0);
  const Station quick = station(1, 0, 0, 11.0);
  const std::vector<Station> both{slow, quick};
  CHECK(t_collision(p, both) == t_frame(p, slow) + p.sifs + t_ack(p, slow) + p.difs);
}

TEST_CASE("control frames use the highest basic rate not above the data rate") {
  const WifiParams n = baseline_80211n();
  CHECK(n.control_rate(144) == 24);
  CHECK(n.control_rate(11) == 11);
  CHECK(n.control_rate(6) == 5.5);
  CHECK(n.control_rate(1) == 1);
  CHECK(t_ack(n, station(0, 0, 0, 144)) == 24 + 112.0 / 24);
  CHECK(bianchi_80211b().control_rate(11) == 1);
}

TEST_CASE("decrement example state") {
  const WifiParams p = bianchi_80211b();
  SystemState s = state_of({station(0, 0, 2), station(1, 0, 2), station(2, 1, 6)});
  const Occupancy before = s.occupancy(p);
  CHECK(before.at(0, 2) == 2);
  CHECK(before.at(1, 6) == 1);
  CHECK(before.total() == 3);

  Rng rng(1);
  const StepResult r = step(s, p, TrafficMode::Saturated, rng);
  CHECK(r.transition.kind == TransitionKind::Decrement);
  CHECK(r.transition.duration == p.slot_time);
  CHECK(r.state.elapsed == s.elapsed + p.slot_time);
  CHECK(r.state.stations[0].backoff == 1);
  CHECK(r.state.stations[1].backoff == 1);
  CHECK(r.state.stations[2].backoff == 5);
  CHECK(r.events.empty());
  // the input is untouched
  CHECK(s.stations[0].backoff == 2);
}

TEST_CASE("success resets the winner") {
  const WifiParams p = bianchi_80211b();
  Rng rng(2);
  SystemState s = state_of({station(0, 3, 0), station(1, 1, 4)});

  StepResult r = step(s, p, TrafficMode::Saturated, rng);
  CHECK(r.transition.kind == TransitionKind::Success);
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].outcome == Outcome::Delivered);
  CHECK(r.events[0].attempts == 4);
  CHECK(r.events[0].latency == s.elapsed + t_success(p, s.stations[0]));
  CHECK(r.state.stations[0].retry == 0);
  CHECK(r.state.stations[0].active);
  CHECK(r.state.stations[0].backoff < 16);
  CHECK(r.state.stations[0].packet_start == r.state.elapsed - p.difs);
  CHECK(r.state.stations[1].backoff == 4);
  CHECK(r.state.stations[1].retry == 1);

  r = step(s, p, TrafficMode::SinglePacket, rng);
  CHECK_FALSE(r.state.stations[0].active);
  CHECK(r.state.stations[0].retry == 0);
  CHECK(r.state.active_count() == 1);
}

TEST_CASE("collision at the retry limit drops both packets") {
  WifiParams p = bianchi_80211b();
  Rng rng(3);
  SystemState s = state_of({station(0, 6, 0), station(1, 6, 0), station(2, 0, 9)});
  const StepResult r = step(s, p, TrafficMode::SinglePacket, rng);
  CHECK(r.transition.kind == TransitionKind::Collision);
  REQUIRE(r.events.size() == 2);
  for (const PacketEvent& e : r.events) {
    CHECK(e.outcome == Outcome::Lost);
    CHECK(e.attempts == 7);
  }
  CHECK(r.state.active_count() == 1);
  CHECK(r.state.stations[2].backoff == 9);
}

TEST_CASE("collision below the limit increments retry and redraws") {
  const WifiParams p = bianchi_80211b();
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    SystemState s = state_of({station(0, 1, 0), station(1, 6, 0), station(2, 0, 3)});
    const StepResult r = step(s, p, TrafficMode::Saturated, rng);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].station == 1);
    CHECK(r.events[0].outcome == Outcome::Lost);
    CHECK(r.state.stations[0].retry == 2);
    CHECK(r.state.stations[0].backoff < 64);
    CHECK(r.state.stations[1].retry == 0);
    CHECK(r.state.stations[1].backoff < 16);
    CHECK(r.state.stations[2].backoff == 3);
  }
}

TEST_CASE("invariants over long saturated traces") {
  WifiParams p = bianchi_80211b();
  p.cw_min_exponent = 1;
  p.max_retries = 3;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    SystemState s = synchronized_start(p, homogeneous_stations(p, 6), rng);
    std::vector<PacketEvent> events;
    for (int i = 0; i < 5000; ++i) {
      const Micros before = s.elapsed;
      const Transition t = classify(s);
      std::vector<PacketEvent> fresh;
      const Transition done = step_in_place(s, p, TrafficMode::Saturated, rng, fresh);
      CHECK(done.kind == t.kind);
      CHECK(s.elapsed > before);
      if (t.kind == TransitionKind::Decrement) CHECK(s.elapsed - before == p.slot_time);
      if (t.kind != TransitionKind::Collision) {
        for (const PacketEvent& e : fresh) CHECK(e.outcome == Outcome::Delivered);
      }
      for (const Station& st : s.stations) {
        CHECK(st.retry <= p.max_retries);
        CHECK(st.backoff < window(p, st.retry));
        CHECK(st.backoff >= 0);
      }
      CHECK(s.occupancy(p).total() == s.active_count());
      events.insert(events.end(), fresh.begin(), fresh.end());
    }
    for (const PacketEvent& e : events) {
      CHECK(e.attempts <= p.max_retries + 1);
      if (e.outcome == Outcome::Lost) CHECK(e.attempts == p.max_retries + 1);
      CHECK(e.latency > 0);
    }
  }
}

TEST_CASE("skip_idle equals repeated decrements") {
  const WifiParams p = bianchi_80211b();
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    SystemState a = synchronized_start(p, homogeneous_stations(p, 4), rng);
    SystemState b = a;
    const int k = idle_slots(a);
    skip_idle(a, p, k);
    std::vector<PacketEvent> none;
    for (int j = 0; j < k; ++j) step_in_place(b, p, TrafficMode::Saturated, rng, none);
    CHECK(none.empty());
    CHECK(a.elapsed == b.elapsed);
    for (std::size_t j = 0; j < a.stations.size(); ++j) {
      CHECK(a.stations[j].backoff == b.stations[j].backoff);
    }
    CHECK(classify(a).kind != TransitionKind::Decrement);
  }
}

TEST_CASE("synchronized start") {
  const WifiParams p = bianchi_80211b();
  Rng rng(1);
  const SystemState s = synchronized_start(p, homogeneous_stations(p, 3), rng);
  CHECK(s.elapsed == p.difs);
  for (const Station& st : s.stations) {
    CHECK(st.active);
    CHECK(st.retry == 0);
    CHECK(st.packet_start == 0);
    CHECK(st.backoff < 16);
  }
  std::vector<Station> bad = homogeneous_stations(p, 2);
  bad[1].id = 5;
  CHECK_THROWS_AS(synchronized_start(p, bad, rng), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  WifiParams p = bianchi_80211b();
  CHECK_NOTHROW(p.validate());
  CHECK_NOTHROW(baseline_80211n().validate());
  p.slot_time = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = bianchi_80211b();
  p.cw_max = 7;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = bianchi_80211b();
  p.max_retries = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}
