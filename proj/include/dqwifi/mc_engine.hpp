#pragma once

// Monte Carlo evaluation of the DCF model: saturated (ergodic) traces,
// one-packet-per-station (transient) replications, and percentile
// convergence studies.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dqwifi/dcf_model.hpp"
#include "dqwifi/deltaq.hpp"

namespace dqwifi {

enum class StartMode { Synchronized, Random };
enum class EvaluationMode { Ergodic, Transient };

struct StationTally {
  std::vector<Micros> delivered;
  std::size_t lost = 0;
};

struct ErgodicResult {
  DeltaQ per_packet_latency;
  std::size_t packets_observed = 0;
  std::size_t delivered = 0;
  std::size_t lost = 0;
  Micros elapsed = 0.0;              // simulated time spanned by the trace
  std::vector<PacketEvent> events;   // in occurrence order
  std::vector<StationTally> per_station;

  DeltaQ station_latency(int station) const;
};

/// Saturated evaluation: every station always has a packet. Runs from a
/// random starting state until exactly `packet_outcomes` delivered-or-lost
/// events are recorded.
ErgodicResult run_ergodic(const WifiParams& params, std::vector<Station> stations,
                          std::size_t packet_outcomes, std::uint64_t seed);
ErgodicResult run_ergodic(const WifiParams& params, int n_stations,
                          std::size_t packet_outcomes, std::uint64_t seed);

struct StationCompletion {
  Micros time = 0.0;
  Outcome outcome = Outcome::Delivered;
};

struct TransientResult {
  std::vector<Micros> time_to_empty;  // one per replication
  std::size_t replications = 0;
  int n_stations = 0;
  // replications x n_stations, row-major
  std::vector<StationCompletion> completions;

  DeltaQ tte() const;
  Micros mean_tte() const;
  /// Completion time of one station's packet; drops count as loss.
  DeltaQ station_latency(int station) const;
};

/// One packet per station; each replication runs until every station has
/// delivered or dropped its packet. Replication r draws from a stream seeded
/// by (seed, r), so results do not depend on `workers` (0 = all cores).
TransientResult run_transient(const WifiParams& params, std::vector<Station> stations,
                              std::size_t replications, std::uint64_t seed,
                              StartMode start = StartMode::Synchronized,
                              unsigned workers = 0);
TransientResult run_transient(const WifiParams& params, int n_stations,
                              std::size_t replications, std::uint64_t seed,
                              StartMode start = StartMode::Synchronized,
                              unsigned workers = 0);

/// Upper bound on transmission events in one transient replication.
std::size_t max_transmissions(const WifiParams& params, int n_stations);

struct SpreadSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double iqr() const { return q3 - q1; }
};

/// Lower-empirical quartiles of a non-empty value set.
SpreadSummary summarize(std::vector<double> values);

struct ConvergenceRow {
  std::size_t size = 0;
  std::vector<double> estimates;  // one per run; NaN when undefined
  std::size_t undefined = 0;
  SpreadSummary spread;
};

/// For each sample size, `runs` independent evaluations and the q-quantile
/// of each (per-packet latency in ergodic mode, time-to-empty in transient).
std::vector<ConvergenceRow> convergence_study(const WifiParams& params, int n_stations,
                                              EvaluationMode mode, std::size_t runs,
                                              const std::vector<std::size_t>& sizes,
                                              double q, std::uint64_t seed,
                                              unsigned workers = 0);

}  // namespace dqwifi
