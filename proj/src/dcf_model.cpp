#include "dqwifi/dcf_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dqwifi {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid WiFi parameters: " + what);
}

Micros t_control(const WifiParams& params, int bytes, double frame_rate) {
  return params.phy_header + 8.0 * bytes / params.control_rate(frame_rate);
}

void restart_or_leave(Station& s, const WifiParams& params, TrafficMode mode,
                      Micros now, Rng& rng) {
  s.retry = 0;
  if (mode == TrafficMode::SinglePacket) {
    s.active = false;
    s.backoff = 0;
    return;
  }
  // The trailing DIFS of the exchange just finished is this packet's DIFS.
  s.packet_start = now - params.difs;
  s.backoff = draw_backoff(params, 0, rng);
}

}  // namespace

void WifiParams::validate() const {
  require(slot_time > 0 && sifs > 0 && difs > 0 && phy_header > 0,
          "slot_time, sifs, difs and phy_header must be positive");
  require(mac_header_bits >= 0, "mac_header_bits must be >= 0");
  require(base_rate > 0 && data_rate > 0, "rates must be positive");
  for (double r : basic_rates) require(r > 0, "basic rates must be positive");
  require(cw_min_exponent >= 0 && cw_min_exponent <= 30,
          "cw_min_exponent must lie in [0, 30]");
  require(cw_max >= 0 && static_cast<std::int64_t>(cw_max) + 1 >=
                             (std::int64_t{1} << cw_min_exponent),
          "cw_max + 1 must be at least 2^cw_min_exponent");
  require(max_retries >= 0, "max_retries must be >= 0");
  require(default_packet_size >= 0, "default_packet_size must be >= 0");
  require(rts_bytes > 0 && cts_bytes > 0 && ack_bytes > 0,
          "control frame sizes must be positive");
  require(max_aggregate_bytes >= 0, "max_aggregate_bytes must be >= 0");
}

double WifiParams::control_rate(double frame_rate) const {
  if (basic_rates.empty()) return base_rate;
  double best = 0.0;
  for (double r : basic_rates) {
    if (r <= frame_rate) best = std::max(best, r);
  }
  if (best > 0.0) return best;
  return *std::min_element(basic_rates.begin(), basic_rates.end());
}

int window(const WifiParams& params, int retry) {
  if (retry < 0 || retry > params.max_retries) {
    throw std::out_of_range("retry " + std::to_string(retry) +
                            " outside [0, " + std::to_string(params.max_retries) + "]");
  }
  const std::int64_t cap = static_cast<std::int64_t>(params.cw_max) + 1;
  const int exponent = params.cw_min_exponent + retry;
  if (exponent >= 62) return static_cast<int>(cap);
  return static_cast<int>(std::min(std::int64_t{1} << exponent, cap));
}

int draw_backoff(const WifiParams& params, int retry, Rng& rng) {
  std::uniform_int_distribution<int> dist(0, window(params, retry) - 1);
  return dist(rng);
}

int Occupancy::total() const {
  int sum = 0;
  for (int c : cells_) sum += c;
  return sum;
}

int SystemState::active_count() const {
  return static_cast<int>(std::count_if(stations.begin(), stations.end(),
                                        [](const Station& s) { return s.active; }));
}

Occupancy SystemState::occupancy(const WifiParams& params) const {
  Occupancy occ(params.max_retries + 1, window(params, params.max_retries));
  for (const Station& s : stations) {
    if (s.active) ++occ.at(s.retry, s.backoff);
  }
  return occ;
}

Transition classify(const SystemState& state) {
  Transition t;
  bool any_active = false;
  for (const Station& s : state.stations) {
    if (!s.active) continue;
    any_active = true;
    if (s.backoff == 0) t.stations.push_back(s.id);
  }
  if (!any_active) throw std::invalid_argument("classify on an empty system");
  if (t.stations.empty()) {
    t.kind = TransitionKind::Decrement;
  } else if (t.stations.size() == 1) {
    t.kind = TransitionKind::Success;
  } else {
    t.kind = TransitionKind::Collision;
  }
  return t;
}

Micros t_frame(const WifiParams& params, const Station& station) {
  return params.phy_header +
         (params.mac_header_bits + 8.0 * station.packet_size) / station.data_rate;
}

Micros t_ack(const WifiParams& params, const Station& station) {
  return t_control(params, params.ack_bytes, station.data_rate);
}

Micros t_rts(const WifiParams& params, const Station& station) {
  return t_control(params, params.rts_bytes, station.data_rate);
}

Micros t_cts(const WifiParams& params, const Station& station) {
  return t_control(params, params.cts_bytes, station.data_rate);
}

Micros t_success(const WifiParams& params, const Station& station) {
  Micros t = t_frame(params, station) + params.sifs + t_ack(params, station) +
             params.difs;
  if (params.rts_cts_enabled) {
    t += t_rts(params, station) + params.sifs + t_cts(params, station) + params.sifs;
  }
  return t;
}

Micros t_collision(const WifiParams& params, std::span<const Station> colliders) {
  if (colliders.size() < 2) {
    throw std::invalid_argument("a collision needs at least two stations");
  }
  Micros longest = 0.0;
  for (const Station& s : colliders) {
    const Micros t = params.rts_cts_enabled
                         ? t_rts(params, s) + params.sifs + t_cts(params, s) + params.difs
                         : t_frame(params, s) + params.sifs + t_ack(params, s) + params.difs;
    longest = std::max(longest, t);
  }
  return longest;
}

int idle_slots(const SystemState& state) {
  int slots = -1;
  for (const Station& s : state.stations) {
    if (!s.active) continue;
    slots = slots < 0 ? s.backoff : std::min(slots, s.backoff);
  }
  if (slots < 0) throw std::invalid_argument("idle_slots on an empty system");
  return slots;
}

void skip_idle(SystemState& state, const WifiParams& params, int slots) {
  if (slots <= 0) return;
  for (Station& s : state.stations) {
    if (s.active) s.backoff -= slots;
  }
  state.elapsed += slots * params.slot_time;
}

Transition step_in_place(SystemState& state, const WifiParams& params,
                         TrafficMode mode, Rng& rng,
                         std::vector<PacketEvent>& events) {
  Transition t = classify(state);
  switch (t.kind) {
    case TransitionKind::Decrement:
      t.duration = params.slot_time;
      skip_idle(state, params, 1);
      break;

    case TransitionKind::Success: {
      Station& winner = state.stations[static_cast<std::size_t>(t.stations.front())];
      t.duration = t_success(params, winner);
      state.elapsed += t.duration;
      events.push_back(PacketEvent{winner.id, Outcome::Delivered,
                                   state.elapsed - winner.packet_start,
                                   winner.retry + 1});
      restart_or_leave(winner, params, mode, state.elapsed, rng);
      break;
    }

    case TransitionKind::Collision: {
      std::vector<Station> colliders;
      colliders.reserve(t.stations.size());
      for (int id : t.stations) colliders.push_back(state.stations[static_cast<std::size_t>(id)]);
      t.duration = t_collision(params, colliders);
      state.elapsed += t.duration;
      for (int id : t.stations) {
        Station& s = state.stations[static_cast<std::size_t>(id)];
        if (s.retry == params.max_retries) {
          events.push_back(PacketEvent{s.id, Outcome::Lost,
                                       state.elapsed - s.packet_start, s.retry + 1});
          restart_or_leave(s, params, mode, state.elapsed, rng);
        } else {
          ++s.retry;
          s.backoff = draw_backoff(params, s.retry, rng);
        }
      }
      break;
    }
  }
  return t;
}

StepResult step(const SystemState& state, const WifiParams& params,
                TrafficMode mode, Rng& rng) {
  StepResult r{state, {}, {}};
  r.transition = step_in_place(r.state, params, mode, rng, r.events);
  return r;
}

std::vector<Station> homogeneous_stations(const WifiParams& params, int count) {
  std::vector<Station> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    Station s;
    s.id = i;
    s.data_rate = params.data_rate;
    s.packet_size = params.default_packet_size;
    out.push_back(s);
  }
  return out;
}

SystemState synchronized_start(const WifiParams& params,
                               std::vector<Station> stations, Rng& rng) {
  SystemState state;
  state.stations = std::move(stations);
  for (std::size_t i = 0; i < state.stations.size(); ++i) {
    Station& s = state.stations[i];
    if (s.id != static_cast<int>(i)) {
      throw std::invalid_argument("station ids must equal their position");
    }
    s.retry = 0;
    s.active = true;
    s.packet_start = 0.0;
    s.backoff = draw_backoff(params, 0, rng);
  }
  state.elapsed = params.difs;
  return state;
}

}  // namespace dqwifi
