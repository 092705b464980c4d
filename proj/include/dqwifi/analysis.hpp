#pragma once

// Quantities derived from simulated latency: throughput, throughput bounds
// under bounded latency, and the protocol-feature experiments built on them.

#include <cstdint>
#include <string>
#include <vector>

#include "dqwifi/dcf_model.hpp"
#include "dqwifi/deltaq.hpp"
#include "dqwifi/mc_engine.hpp"

namespace dqwifi {

struct Throughput {
  double packets_per_second = 0.0;
  double mbps = 0.0;
};

/// Back-to-back packets: throughput is the inverse of the mean delivered
/// latency. Lost packets do not count. Throws std::domain_error when nothing
/// was delivered.
Throughput throughput_from_latency(const DeltaQ& latency, int packet_size_bytes);

/// Throughput ceiling for stable queues: one packet per station arrives
/// every mean time-to-empty.
struct ThroughputBound {
  int n_stations = 0;
  Micros mean_tte = 0.0;
  double total_mbps = 0.0;
  double per_station_mbps = 0.0;
};

ThroughputBound bound_from_tte(const TransientResult& tte, int packet_size_bytes);

/// Not part of the mean-rate stability argument: the same arithmetic with
/// the q-quantile of time-to-empty in place of its mean.
ThroughputBound percentile_bound(const TransientResult& tte, int packet_size_bytes,
                                 double q);

/// Bounds for each station count from synchronized-start transient runs.
std::vector<ThroughputBound> bound_curve(const WifiParams& params,
                                         const std::vector<int>& station_counts,
                                         std::size_t replications, std::uint64_t seed,
                                         unsigned workers = 0);

struct HeatmapCell {
  int n_stations = 0;
  int packet_size = 0;
  double percent_change = 0.0;
  ThroughputBound reference;
  ThroughputBound toggled;
};

/// Percent change of the throughput bound from flipping rts_cts_enabled
/// relative to `params` as given. Both sides of a cell use the same seed,
/// derived from (seed, n, size). Rows ordered by station count, then size.
std::vector<HeatmapCell> rts_heatmap(const WifiParams& params,
                                     const std::vector<int>& station_counts,
                                     const std::vector<int>& packet_sizes,
                                     std::size_t replications, std::uint64_t seed,
                                     unsigned workers = 0);

/// Smallest packet size with a positive change for `n_stations`, or -1.
int first_positive_size(const std::vector<HeatmapCell>& cells, int n_stations);

struct AnomalyRow {
  double fast_rate = 0.0;
  int station = 0;
  double data_rate = 0.0;
  double bound_mbps = 0.0;        // packet bits / mean time-to-empty
  Micros mean_completion = 0.0;   // over delivered packets
  double delivered_fraction = 0.0;
};

/// Station 0 transmits at `slow_rate`, the others at each rate in
/// `fast_rates` in turn.
std::vector<AnomalyRow> anomaly_experiment(const WifiParams& params, int n_stations,
                                           double slow_rate,
                                           const std::vector<double>& fast_rates,
                                           std::size_t replications, std::uint64_t seed,
                                           unsigned workers = 0);

/// Bound with aggregated frames of `aggregate_size` bytes. Throws
/// std::invalid_argument above params.max_aggregate_bytes (when set).
ThroughputBound amsdu_bound(const WifiParams& params, int n_stations, int aggregate_size,
                            std::size_t replications, std::uint64_t seed,
                            unsigned workers = 0);

struct SaturationPoint {
  int n_stations = 0;
  int window = 0;
  double throughput_mbps = 0.0;   // per-station inverse mean latency, summed
  double elapsed_mbps = 0.0;      // delivered bits over simulated time
  double loss_fraction = 0.0;
  Micros mean_latency = 0.0;
  Micros p90_latency = 0.0;       // NaN when undefined
  ErgodicResult result;
};

/// Saturation throughput for each (station count, initial window exponent).
SaturationPoint saturation_point(const WifiParams& params, int n_stations,
                                 std::size_t outcomes, std::uint64_t seed);
std::vector<SaturationPoint> saturation_sweep(const WifiParams& params,
                                              const std::vector<int>& station_counts,
                                              const std::vector<int>& window_exponents,
                                              std::size_t outcomes, std::uint64_t seed,
                                              unsigned workers = 0);

struct NamedTte {
  std::string variant;
  int packet_size = 0;
  TransientResult result;
  ThroughputBound bound;
};

/// Baseline, RTS/CTS and A-MSDU (largest aggregate, or 7935 bytes when the
/// preset sets no cap) time-to-empty for one station count.
std::vector<NamedTte> tte_variants(const WifiParams& params, int n_stations,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned workers = 0);

}  // namespace dqwifi
