#include "dqwifi/lts_exact.hpp"

#include <limits>
#include <string>
#include <utility>

namespace dqwifi {
namespace {

struct Completion {
  bool done = false;
  Outcome outcome = Outcome::Delivered;
  DeltaQ at;
};

struct Leaves {
  std::vector<std::pair<double, DeltaQ>> tte;
  std::vector<std::vector<std::pair<double, DeltaQ>>> per_station;
};

// Thrown internally by the counting pass once the budget is passed.
struct CountLimitReached {};

class Unroller {
 public:
  Unroller(const WifiParams& params, const UnrollOptions& options, bool counting,
           std::size_t n_stations)
      : params_(params), options_(options), counting_(counting) {
    leaves_.per_station.resize(n_stations);
  }

  void expand(SystemState& state, double prob, const DeltaQ& delay,
              std::vector<Completion>& completions) {
    ++nodes_;
    if (counting_ && nodes_ > options_.node_budget) throw CountLimitReached{};

    const Micros reached = counting_ ? state.elapsed : delay.atoms().front().delay;
    if (options_.max_latency && reached > *options_.max_latency) {
      if (!counting_) record_cutoff(prob, completions);
      return;
    }
    if (state.empty()) {
      if (!counting_) record_leaf(prob, delay, completions);
      return;
    }

    const Transition t = classify(state);
    switch (t.kind) {
      case TransitionKind::Decrement: {
        SystemState child = state;
        skip_idle(child, params_, 1);
        expand(child, prob, edge(delay, params_.slot_time), completions);
        return;
      }
      case TransitionKind::Success: {
        SystemState child = state;
        Station& winner = child.stations[static_cast<std::size_t>(t.stations.front())];
        const Micros d = t_success(params_, winner);
        child.elapsed += d;
        winner.active = false;
        winner.retry = 0;
        const DeltaQ child_delay = edge(delay, d);
        std::vector<Completion> done = completions;
        done[static_cast<std::size_t>(winner.id)] =
            Completion{true, Outcome::Delivered, child_delay};
        expand(child, prob, child_delay, done);
        return;
      }
      case TransitionKind::Collision:
        expand_collision(state, prob, delay, completions, t);
        return;
    }
  }

  std::size_t nodes() const { return nodes_; }
  Leaves& leaves() { return leaves_; }

 private:
  DeltaQ edge(const DeltaQ& delay, Micros d) const {
    if (counting_) return delay;
    return convolve(delay, DeltaQ::point_mass(d));
  }

  void expand_collision(const SystemState& state, double prob, const DeltaQ& delay,
                        const std::vector<Completion>& completions,
                        const Transition& t) {
    SystemState base = state;
    std::vector<Station> colliders;
    for (int id : t.stations) colliders.push_back(state.stations[static_cast<std::size_t>(id)]);
    const Micros d = t_collision(params_, colliders);
    base.elapsed += d;
    const DeltaQ child_delay = edge(delay, d);

    std::vector<Completion> base_completions = completions;
    std::vector<int> redraw;  // station ids that retry
    std::vector<int> windows;
    for (int id : t.stations) {
      Station& s = base.stations[static_cast<std::size_t>(id)];
      if (s.retry == params_.max_retries) {
        s.active = false;
        s.retry = 0;
        base_completions[static_cast<std::size_t>(id)] =
            Completion{true, Outcome::Lost, child_delay};
      } else {
        ++s.retry;
        redraw.push_back(id);
        windows.push_back(window(params_, s.retry));
      }
    }

    double branch_prob = prob;
    for (int w : windows) branch_prob /= w;

    // Odometer over every combination of redraws.
    std::vector<int> draw(redraw.size(), 0);
    while (true) {
      SystemState child = base;
      for (std::size_t k = 0; k < redraw.size(); ++k) {
        child.stations[static_cast<std::size_t>(redraw[k])].backoff = draw[k];
      }
      std::vector<Completion> child_completions = base_completions;
      expand(child, branch_prob, child_delay, child_completions);

      std::size_t k = 0;
      while (k < draw.size() && ++draw[k] == windows[k]) draw[k++] = 0;
      if (k == draw.size()) break;
    }
  }

  void record_leaf(double prob, const DeltaQ& delay,
                   const std::vector<Completion>& completions) {
    leaves_.tte.emplace_back(prob, delay);
    for (std::size_t s = 0; s < completions.size(); ++s) {
      const Completion& c = completions[s];
      leaves_.per_station[s].emplace_back(
          prob, c.done && c.outcome == Outcome::Delivered ? c.at : DeltaQ::all_loss());
    }
  }

  void record_cutoff(double prob, const std::vector<Completion>& completions) {
    leaves_.tte.emplace_back(prob, DeltaQ::all_loss());
    for (std::size_t s = 0; s < completions.size(); ++s) {
      const Completion& c = completions[s];
      const bool in_time = c.done && c.outcome == Outcome::Delivered &&
                           c.at.atoms().front().delay <= *options_.max_latency;
      leaves_.per_station[s].emplace_back(prob, in_time ? c.at : DeltaQ::all_loss());
    }
  }

  const WifiParams& params_;
  const UnrollOptions& options_;
  bool counting_;
  std::size_t nodes_ = 0;
  Leaves leaves_;
};

// Root states with their probability: either the given state, or every
// combination of first draws.
std::vector<std::pair<double, SystemState>> roots_for(const WifiParams& params,
                                                      const SystemState& state,
                                                      bool draw_all) {
  if (!draw_all) return {{1.0, state}};
  std::vector<std::pair<double, SystemState>> roots;
  const int w = window(params, 0);
  const std::size_t n = state.stations.size();
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p /= w;
  std::vector<int> draw(n, 0);
  while (true) {
    SystemState s = state;
    for (std::size_t i = 0; i < n; ++i) s.stations[i].backoff = draw[i];
    roots.emplace_back(p, std::move(s));
    std::size_t k = 0;
    while (k < n && ++draw[k] == w) draw[k++] = 0;
    if (k == n) break;
  }
  return roots;
}

ExactResult run(const WifiParams& params, const SystemState& state, bool draw_all,
                const UnrollOptions& options) {
  params.validate();
  for (std::size_t i = 0; i < state.stations.size(); ++i) {
    if (state.stations[i].id != static_cast<int>(i)) {
      throw std::invalid_argument("station ids must equal their position");
    }
  }
  if (state.stations.empty()) throw std::invalid_argument("need at least one station");

  const auto roots = roots_for(params, state, draw_all);
  const std::size_t n = state.stations.size();

  {
    Unroller counter(params, options, true, n);
    try {
      for (auto [p, root] : roots) {
        std::vector<Completion> none(n);
        counter.expand(root, p, DeltaQ(), none);
      }
    } catch (const CountLimitReached&) {
      throw BudgetExceeded(counter.nodes(), options.node_budget);
    }
  }

  Unroller unroller(params, options, false, n);
  for (auto [p, root] : roots) {
    std::vector<Completion> none(n);
    unroller.expand(root, p, DeltaQ::point_mass(root.elapsed), none);
  }

  ExactResult result;
  result.nodes = unroller.nodes();
  result.tte = mixture(unroller.leaves().tte);
  for (const auto& components : unroller.leaves().per_station) {
    result.per_station_latency.push_back(mixture(components));
  }
  return result;
}

}  // namespace

BudgetExceeded::BudgetExceeded(std::size_t projected, std::size_t budget)
    : std::runtime_error("unrolled tree exceeds the node budget: at least " +
                         std::to_string(projected) + " nodes projected, budget " +
                         std::to_string(budget)),
      projected_(projected),
      budget_(budget) {}

ExactResult unroll_exact(const SystemState& initial, const WifiParams& params,
                         const UnrollOptions& options) {
  return run(params, initial, false, options);
}

ExactResult unroll_synchronized(const WifiParams& params, std::vector<Station> stations,
                                const UnrollOptions& options) {
  SystemState state;
  state.stations = std::move(stations);
  for (Station& s : state.stations) {
    s.retry = 0;
    s.active = true;
    s.packet_start = 0.0;
  }
  state.elapsed = params.difs;
  return run(params, state, true, options);
}

std::uint64_t configuration_count(const WifiParams& params, int n) {
  std::uint64_t per_station = 0;
  for (int r = 0; r <= params.max_retries; ++r) {
    per_station += static_cast<std::uint64_t>(window(params, r));
  }
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / per_station) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= per_station;
  }
  return total;
}

}  // namespace dqwifi
