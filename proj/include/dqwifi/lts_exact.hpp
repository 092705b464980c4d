#pragma once

// Exact evaluation of small instances: the transition system is unrolled
// into a tree (one copy of a state per path reaching it), delays compose by
// convolution along each path, and terminal paths are mixed by probability.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dqwifi/dcf_model.hpp"
#include "dqwifi/deltaq.hpp"

namespace dqwifi {

struct UnrollOptions {
  // Paths whose accumulated delay exceeds this count as loss.
  std::optional<Micros> max_latency;
  std::size_t node_budget = 20'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t projected, std::size_t budget);
  std::size_t projected() const { return projected_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t projected_;
  std::size_t budget_;
};

struct ExactResult {
  DeltaQ tte;
  std::vector<DeltaQ> per_station_latency;  // indexed by station id
  std::size_t nodes = 0;                    // tree nodes expanded
};

/// Unrolls from a concrete state (every active station holding a draw).
/// The state's `elapsed` is the root's delay; packet clocks start at 0.
/// Throws BudgetExceeded before expanding when the tree is larger than
/// `options.node_budget`.
ExactResult unroll_exact(const SystemState& initial, const WifiParams& params,
                         const UnrollOptions& options = {});

/// Unrolls the synchronized start: the root branches over every equally
/// likely combination of first back-off draws, after the shared DIFS.
ExactResult unroll_synchronized(const WifiParams& params, std::vector<Station> stations,
                                const UnrollOptions& options = {});

/// Distinct (retry, back-off) configurations of `n` stations, saturating at
/// UINT64_MAX. 2032^n for the 802.11b parameters.
std::uint64_t configuration_count(const WifiParams& params, int n);

}  // namespace dqwifi
