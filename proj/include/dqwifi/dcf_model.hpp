#pragma once

// 802.11 DCF contention model. The system state is the set of stations with
// their retry and back-off counters; each step is one of three transitions
// (idle slot, single transmission, collision) with a deterministic duration.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dqwifi/deltaq.hpp"

namespace dqwifi {

using Rng = std::mt19937_64;

/// Protocol timing and contention constants. Durations are microseconds,
/// rates Mbit/s, sizes bytes unless the name says otherwise.
struct WifiParams {
  Micros slot_time = 50.0;
  Micros sifs = 28.0;
  Micros difs = 128.0;
  Micros phy_header = 128.0;
  double mac_header_bits = 272.0;
  double base_rate = 1.0;
  // Control frames go at the highest basic rate not above the data rate.
  // Empty means {base_rate}.
  std::vector<double> basic_rates;
  double data_rate = 1.0;
  int cw_min_exponent = 4;
  int cw_max = 1023;
  int max_retries = 6;
  int default_packet_size = 1023;
  bool rts_cts_enabled = false;
  int rts_bytes = 20;
  int cts_bytes = 14;
  int ack_bytes = 14;
  // Largest aggregate (A-MSDU) payload the PHY allows; 0 means no cap.
  int max_aggregate_bytes = 0;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  double control_rate(double frame_rate) const;
};

/// Contention window size at a retry count: min(2^(exp + retry), cw_max + 1).
/// Throws std::out_of_range for retry outside [0, max_retries].
int window(const WifiParams& params, int retry);

/// Uniform back-off draw in {0, ..., window(retry) - 1}.
int draw_backoff(const WifiParams& params, int retry, Rng& rng);

struct Station {
  int id = 0;
  double data_rate = 1.0;
  int packet_size = 1023;
  int retry = 0;
  int backoff = 0;
  bool active = true;
  // Moment the head-of-line packet's procedure began (its DIFS included).
  Micros packet_start = 0.0;
};

/// Per-(retry, back-off) station counts.
class Occupancy {
 public:
  Occupancy(int retries, int backoffs)
      : backoffs_(backoffs), cells_(static_cast<std::size_t>(retries * backoffs), 0) {}

  int rows() const { return static_cast<int>(cells_.size()) / backoffs_; }
  int cols() const { return backoffs_; }
  int at(int retry, int backoff) const { return cells_[index(retry, backoff)]; }
  int& at(int retry, int backoff) { return cells_[index(retry, backoff)]; }
  int total() const;

 private:
  std::size_t index(int retry, int backoff) const {
    return static_cast<std::size_t>(retry * backoffs_ + backoff);
  }
  int backoffs_;
  std::vector<int> cells_;
};

struct SystemState {
  std::vector<Station> stations;
  Micros elapsed = 0.0;

  int active_count() const;
  bool empty() const { return active_count() == 0; }
  Occupancy occupancy(const WifiParams& params) const;
};

enum class TransitionKind { Decrement, Success, Collision };

struct Transition {
  TransitionKind kind = TransitionKind::Decrement;
  std::vector<int> stations;  // winner, or every collider
  Micros duration = 0.0;
};

/// Which transition the state takes next, with the stations at back-off 0.
/// Depends on back-off counters only. Throws std::invalid_argument when no
/// station is active.
Transition classify(const SystemState& state);

/// Time on air for the data frame alone.
Micros t_frame(const WifiParams& params, const Station& station);
Micros t_ack(const WifiParams& params, const Station& station);
Micros t_rts(const WifiParams& params, const Station& station);
Micros t_cts(const WifiParams& params, const Station& station);

/// Successful exchange: [RTS SIFS CTS SIFS] DATA SIFS ACK DIFS.
Micros t_success(const WifiParams& params, const Station& station);

/// Collision among `colliders`, governed by the slowest one. Without RTS/CTS
/// the ACK timeout is taken as one ACK duration; with it, the CTS timeout is
/// one CTS duration. Requires at least two colliders.
Micros t_collision(const WifiParams& params, std::span<const Station> colliders);

/// What happens to a station once its packet is delivered or dropped.
enum class TrafficMode {
  Saturated,     // immediately starts a fresh packet (ergodic evaluation)
  SinglePacket,  // leaves the system (transient evaluation)
};

enum class Outcome { Delivered, Lost };

struct PacketEvent {
  int station = 0;
  Outcome outcome = Outcome::Delivered;
  Micros latency = 0.0;  // completion (or drop) time minus packet_start
  int attempts = 1;
};

struct StepResult {
  SystemState state;
  Transition transition;
  std::vector<PacketEvent> events;
};

/// One transition of the model, returned as a new state.
StepResult step(const SystemState& state, const WifiParams& params,
                TrafficMode mode, Rng& rng);

/// In-place form of `step`; appends packet events to `events`.
Transition step_in_place(SystemState& state, const WifiParams& params,
                         TrafficMode mode, Rng& rng,
                         std::vector<PacketEvent>& events);

/// Number of consecutive Decrement transitions before the next transmission.
int idle_slots(const SystemState& state);

/// Applies `slots` Decrement transitions at once. `slots` must not exceed
/// idle_slots(state).
void skip_idle(SystemState& state, const WifiParams& params, int slots);

/// `count` stations with the parameter set's default rate and packet size,
/// not yet holding a back-off draw.
std::vector<Station> homogeneous_stations(const WifiParams& params, int count);

/// Every station starts its procedure at time 0 at retry 0 with a fresh
/// draw; the shared initial DIFS has elapsed when contention begins.
SystemState synchronized_start(const WifiParams& params,
                               std::vector<Station> stations, Rng& rng);

}  // namespace dqwifi
