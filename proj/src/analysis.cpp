#include "dqwifi/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dqwifi/parallel.hpp"

namespace dqwifi {
namespace {

constexpr int kDefaultAmsduCap = 7935;

double bits(int packet_size_bytes) { return 8.0 * packet_size_bytes; }

ThroughputBound make_bound(int n, Micros service_time, int packet_size_bytes) {
  ThroughputBound b;
  b.n_stations = n;
  b.mean_tte = service_time;
  // bits per microsecond is Mbit/s
  b.per_station_mbps = bits(packet_size_bytes) / service_time;
  b.total_mbps = n * b.per_station_mbps;
  return b;
}

}  // namespace

Throughput throughput_from_latency(const DeltaQ& latency, int packet_size_bytes) {
  const Micros mean = latency.mean_delivered();
  Throughput t;
  t.packets_per_second = 1e6 / mean;
  t.mbps = bits(packet_size_bytes) / mean;
  return t;
}

ThroughputBound bound_from_tte(const TransientResult& tte, int packet_size_bytes) {
  if (tte.time_to_empty.empty()) throw std::invalid_argument("empty time-to-empty set");
  return make_bound(tte.n_stations, tte.mean_tte(), packet_size_bytes);
}

ThroughputBound percentile_bound(const TransientResult& tte, int packet_size_bytes,
                                 double q) {
  const QuantileEstimate est = tte.tte().quantile(q);
  return make_bound(tte.n_stations, est.value, packet_size_bytes);
}

std::vector<ThroughputBound> bound_curve(const WifiParams& params,
                                         const std::vector<int>& station_counts,
                                         std::size_t replications, std::uint64_t seed,
                                         unsigned workers) {
  std::vector<ThroughputBound> out;
  for (int n : station_counts) {
    const TransientResult r =
        run_transient(params, n, replications, derive_seed(seed, {static_cast<std::uint64_t>(n)}),
                      StartMode::Synchronized, workers);
    out.push_back(bound_from_tte(r, params.default_packet_size));
  }
  return out;
}

std::vector<HeatmapCell> rts_heatmap(const WifiParams& params,
                                     const std::vector<int>& station_counts,
                                     const std::vector<int>& packet_sizes,
                                     std::size_t replications, std::uint64_t seed,
                                     unsigned workers) {
  if (station_counts.empty() || packet_sizes.empty()) {
    throw std::invalid_argument("heatmap axes must be non-empty");
  }
  std::vector<HeatmapCell> cells(station_counts.size() * packet_sizes.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const int n = station_counts[i / packet_sizes.size()];
    const int size = packet_sizes[i % packet_sizes.size()];
    const std::uint64_t cell_seed = derive_seed(
        seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(size)});

    WifiParams reference = params;
    reference.default_packet_size = size;
    WifiParams toggled = reference;
    toggled.rts_cts_enabled = !reference.rts_cts_enabled;

    HeatmapCell& cell = cells[i];
    cell.n_stations = n;
    cell.packet_size = size;
    cell.reference = bound_from_tte(
        run_transient(reference, n, replications, cell_seed, StartMode::Synchronized, 1),
        size);
    cell.toggled = bound_from_tte(
        run_transient(toggled, n, replications, cell_seed, StartMode::Synchronized, 1),
        size);
    cell.percent_change = 100.0 * (cell.toggled.total_mbps - cell.reference.total_mbps) /
                          cell.reference.total_mbps;
  });
  return cells;
}

int first_positive_size(const std::vector<HeatmapCell>& cells, int n_stations) {
  int best = -1;
  for (const HeatmapCell& c : cells) {
    if (c.n_stations != n_stations || c.percent_change <= 0.0) continue;
    if (best < 0 || c.packet_size < best) best = c.packet_size;
  }
  return best;
}

std::vector<AnomalyRow> anomaly_experiment(const WifiParams& params, int n_stations,
                                           double slow_rate,
                                           const std::vector<double>& fast_rates,
                                           std::size_t replications, std::uint64_t seed,
                                           unsigned workers) {
  if (n_stations < 2) throw std::invalid_argument("anomaly experiment needs n >= 2");
  std::vector<AnomalyRow> rows;
  for (std::size_t k = 0; k < fast_rates.size(); ++k) {
    std::vector<Station> stations = homogeneous_stations(params, n_stations);
    stations[0].data_rate = slow_rate;
    for (std::size_t i = 1; i < stations.size(); ++i) stations[i].data_rate = fast_rates[k];

    const TransientResult r = run_transient(params, stations, replications,
                                            derive_seed(seed, {k}),
                                            StartMode::Synchronized, workers);
    const Micros mean_tte = r.mean_tte();
    for (const Station& s : stations) {
      const DeltaQ latency = r.station_latency(s.id);
      AnomalyRow row;
      row.fast_rate = fast_rates[k];
      row.station = s.id;
      row.data_rate = s.data_rate;
      row.bound_mbps = bits(s.packet_size) / mean_tte;
      row.delivered_fraction = latency.delivered_mass();
      row.mean_completion = latency.delivered_mass() > 0.0
                                ? latency.mean_delivered()
                                : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
    }
  }
  return rows;
}

ThroughputBound amsdu_bound(const WifiParams& params, int n_stations, int aggregate_size,
                            std::size_t replications, std::uint64_t seed,
                            unsigned workers) {
  if (aggregate_size <= 0) throw std::invalid_argument("aggregate size must be positive");
  if (params.max_aggregate_bytes > 0 && aggregate_size > params.max_aggregate_bytes) {
    throw std::invalid_argument("aggregate of " + std::to_string(aggregate_size) +
                                " bytes exceeds the " +
                                std::to_string(params.max_aggregate_bytes) + "-byte cap");
  }
  WifiParams p = params;
  p.default_packet_size = aggregate_size;
  return bound_from_tte(
      run_transient(p, n_stations, replications, seed, StartMode::Synchronized, workers),
      aggregate_size);
}

SaturationPoint saturation_point(const WifiParams& params, int n_stations,
                                 std::size_t outcomes, std::uint64_t seed) {
  SaturationPoint pt;
  pt.n_stations = n_stations;
  pt.window = window(params, 0);
  pt.result = run_ergodic(params, n_stations, outcomes, seed);

  const int size = params.default_packet_size;
  for (int s = 0; s < n_stations; ++s) {
    const DeltaQ lat = pt.result.station_latency(s);
    if (lat.sample_count() > 0) pt.throughput_mbps += throughput_from_latency(lat, size).mbps;
  }
  pt.elapsed_mbps = static_cast<double>(pt.result.delivered) * bits(size) / pt.result.elapsed;
  pt.loss_fraction = pt.result.per_packet_latency.loss_mass();
  pt.mean_latency = pt.result.delivered > 0 ? pt.result.per_packet_latency.mean_delivered()
                                            : std::numeric_limits<double>::quiet_NaN();
  const QuantileEstimate p90 = pt.result.per_packet_latency.quantile(0.9);
  pt.p90_latency = p90.defined ? p90.value : std::numeric_limits<double>::quiet_NaN();
  return pt;
}

std::vector<SaturationPoint> saturation_sweep(const WifiParams& params,
                                              const std::vector<int>& station_counts,
                                              const std::vector<int>& window_exponents,
                                              std::size_t outcomes, std::uint64_t seed,
                                              unsigned workers) {
  std::vector<SaturationPoint> points(station_counts.size() * window_exponents.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const int n = station_counts[i / window_exponents.size()];
    const int e = window_exponents[i % window_exponents.size()];
    WifiParams p = params;
    p.cw_min_exponent = e;
    points[i] = saturation_point(
        p, n, outcomes,
        derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(e)}));
  });
  return points;
}

std::vector<NamedTte> tte_variants(const WifiParams& params, int n_stations,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned workers) {
  WifiParams base = params;
  base.rts_cts_enabled = false;
  WifiParams rts = base;
  rts.rts_cts_enabled = true;
  WifiParams amsdu = base;
  amsdu.default_packet_size =
      params.max_aggregate_bytes > 0 ? params.max_aggregate_bytes : kDefaultAmsduCap;

  std::vector<NamedTte> out;
  for (const auto& [name, p] : {std::pair{"baseline", base}, std::pair{"rts-cts", rts},
                                std::pair{"a-msdu", amsdu}}) {
    NamedTte v;
    v.variant = name;
    v.packet_size = p.default_packet_size;
    v.result = run_transient(p, n_stations, replications, seed, StartMode::Synchronized,
                             workers);
    v.bound = bound_from_tte(v.result, p.default_packet_size);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace dqwifi
