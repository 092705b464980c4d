#include "dqwifi/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dqwifi/parallel.hpp"

namespace dqwifi {
namespace {

// "Random" start: each station independently at retry 0 with a uniform
// first draw. In distribution this coincides with the synchronized start.
SystemState initial_state(const WifiParams& params, std::vector<Station> stations,
                          StartMode /*start*/, Rng& rng) {
  return synchronized_start(params, std::move(stations), rng);
}

void check_stations(const std::vector<Station>& stations) {
  if (stations.empty()) throw std::invalid_argument("need at least one station");
}

}  // namespace

DeltaQ ErgodicResult::station_latency(int station) const {
  const StationTally& t = per_station.at(static_cast<std::size_t>(station));
  return DeltaQ::from_samples(t.delivered, t.lost);
}

ErgodicResult run_ergodic(const WifiParams& params, std::vector<Station> stations,
                          std::size_t packet_outcomes, std::uint64_t seed) {
  params.validate();
  check_stations(stations);
  if (packet_outcomes == 0) throw std::invalid_argument("packet_outcomes must be >= 1");

  Rng rng(derive_seed(seed, {0}));
  const std::size_t n = stations.size();
  SystemState state = initial_state(params, std::move(stations), StartMode::Random, rng);

  ErgodicResult r;
  r.events.reserve(packet_outcomes + n);
  while (r.events.size() < packet_outcomes) {
    skip_idle(state, params, idle_slots(state));
    step_in_place(state, params, TrafficMode::Saturated, rng, r.events);
  }
  r.events.resize(packet_outcomes);
  r.elapsed = state.elapsed;

  r.per_station.resize(n);
  std::vector<Micros> delivered;
  delivered.reserve(packet_outcomes);
  for (const PacketEvent& e : r.events) {
    StationTally& tally = r.per_station[static_cast<std::size_t>(e.station)];
    if (e.outcome == Outcome::Delivered) {
      delivered.push_back(e.latency);
      tally.delivered.push_back(e.latency);
    } else {
      ++tally.lost;
    }
  }
  r.delivered = delivered.size();
  r.lost = packet_outcomes - r.delivered;
  r.packets_observed = packet_outcomes;
  r.per_packet_latency = DeltaQ::from_samples(std::move(delivered), r.lost);
  return r;
}

ErgodicResult run_ergodic(const WifiParams& params, int n_stations,
                          std::size_t packet_outcomes, std::uint64_t seed) {
  return run_ergodic(params, homogeneous_stations(params, n_stations), packet_outcomes,
                     seed);
}

DeltaQ TransientResult::tte() const { return DeltaQ::from_samples(time_to_empty, 0); }

Micros TransientResult::mean_tte() const {
  if (time_to_empty.empty()) throw std::domain_error("no transient replications");
  return std::accumulate(time_to_empty.begin(), time_to_empty.end(), 0.0) /
         static_cast<double>(time_to_empty.size());
}

DeltaQ TransientResult::station_latency(int station) const {
  if (station < 0 || station >= n_stations) throw std::out_of_range("station id");
  std::vector<Micros> delivered;
  std::size_t lost = 0;
  for (std::size_t rep = 0; rep < replications; ++rep) {
    const StationCompletion& c =
        completions[rep * static_cast<std::size_t>(n_stations) +
                    static_cast<std::size_t>(station)];
    if (c.outcome == Outcome::Delivered) {
      delivered.push_back(c.time);
    } else {
      ++lost;
    }
  }
  return DeltaQ::from_samples(std::move(delivered), lost);
}

std::size_t max_transmissions(const WifiParams& params, int n_stations) {
  return static_cast<std::size_t>(n_stations) *
         static_cast<std::size_t>(params.max_retries + 1);
}

TransientResult run_transient(const WifiParams& params, std::vector<Station> stations,
                              std::size_t replications, std::uint64_t seed,
                              StartMode start, unsigned workers) {
  params.validate();
  check_stations(stations);
  if (replications == 0) throw std::invalid_argument("replications must be >= 1");

  TransientResult r;
  r.replications = replications;
  r.n_stations = static_cast<int>(stations.size());
  r.time_to_empty.assign(replications, 0.0);
  r.completions.assign(replications * stations.size(), StationCompletion{});
  const std::size_t limit = max_transmissions(params, r.n_stations);

  parallel_for(replications, workers, [&](std::size_t rep) {
    Rng rng(derive_seed(seed, {rep}));
    SystemState state = initial_state(params, stations, start, rng);
    std::vector<PacketEvent> events;
    std::size_t transmissions = 0;
    while (!state.empty()) {
      skip_idle(state, params, idle_slots(state));
      step_in_place(state, params, TrafficMode::SinglePacket, rng, events);
      if (++transmissions > limit) {
        throw std::logic_error("transient replication exceeded its transmission bound");
      }
    }
    r.time_to_empty[rep] = state.elapsed;
    for (const PacketEvent& e : events) {
      r.completions[rep * stations.size() + static_cast<std::size_t>(e.station)] =
          StationCompletion{e.latency, e.outcome};
    }
  });
  return r;
}

TransientResult run_transient(const WifiParams& params, int n_stations,
                              std::size_t replications, std::uint64_t seed,
                              StartMode start, unsigned workers) {
  return run_transient(params, homogeneous_stations(params, n_stations), replications,
                       seed, start, workers);
}

SpreadSummary summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize of an empty set");
  const DeltaQ d = DeltaQ::from_samples(std::move(values), 0);
  SpreadSummary s;
  s.min = d.samples().front();
  s.max = d.samples().back();
  s.q1 = d.quantile(0.25).value;
  s.median = d.quantile(0.5).value;
  s.q3 = d.quantile(0.75).value;
  return s;
}

std::vector<ConvergenceRow> convergence_study(const WifiParams& params, int n_stations,
                                              EvaluationMode mode, std::size_t runs,
                                              const std::vector<std::size_t>& sizes,
                                              double q, std::uint64_t seed,
                                              unsigned workers) {
  if (runs < 2) throw std::invalid_argument("convergence_study needs runs >= 2");
  if (sizes.empty()) throw std::invalid_argument("convergence_study needs sizes");

  std::vector<ConvergenceRow> rows(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    rows[s].size = sizes[s];
    rows[s].estimates.assign(runs, std::numeric_limits<double>::quiet_NaN());
  }

  parallel_for(sizes.size() * runs, workers, [&](std::size_t task) {
    const std::size_t s = task / runs;
    const std::size_t run = task % runs;
    const std::uint64_t run_seed = derive_seed(seed, {s, run});
    QuantileEstimate est;
    if (mode == EvaluationMode::Ergodic) {
      est = run_ergodic(params, n_stations, sizes[s], run_seed)
                .per_packet_latency.quantile(q);
    } else {
      est = run_transient(params, n_stations, sizes[s], run_seed,
                          StartMode::Random, 1)
                .tte()
                .quantile(q);
    }
    if (est.defined) rows[s].estimates[run] = est.value;
  });

  for (ConvergenceRow& row : rows) {
    std::vector<double> defined;
    for (double v : row.estimates) {
      if (std::isnan(v)) {
        ++row.undefined;
      } else {
        defined.push_back(v);
      }
    }
    if (!defined.empty()) row.spread = summarize(std::move(defined));
  }
  return rows;
}

}  // namespace dqwifi
