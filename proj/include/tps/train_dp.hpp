#pragma once
// Per-train block solver: cheapest arrival-wait-departure chain (or the
// virtual path) under an arbitrary per-slot cost vector.
//
// Label-setting dynamic program over (platform, period, dwell).  A label is
// dominated only by a label that is no more expensive and can reach every
// departure the dominated label can reach: with both labels past the minimum
// dwell the smaller dwell count wins (it keeps more headroom under the
// maximum dwell); below the minimum dwell only equal dwell counts compare.

#include <cstdint>
#include <span>
#include <vector>

#include "tps/network.hpp"

namespace tps {

// Optional restrictions applied while extending labels.
struct DpFilter {
  // Resource claim flags (size = resource space); an arc is unusable when any
  // linked resource is claimed.
  const uint8_t* claimed = nullptr;
  // Arrival caps per siding ordinal; an arrival arc into siding i is unusable
  // when siding_arrivals[i] >= siding_cap.  siding_cap < 0 disables.
  const int32_t* siding_arrivals = nullptr;
  int32_t siding_cap = -1;
};

struct BlockResult {
  bool cancelled = false;
  double cost = 0;
  std::vector<int32_t> arcs;  // global ids; empty when cancelled
};

// costs[i] prices the train's arc slot i (see SpaceTimeNetwork::train_arcs).
// Ties among cheapest complete paths are broken uniformly at random with the
// given seed; the virtual path is chosen only when strictly cheaper than
// every physical path or when no physical path survives the filter.
BlockResult solve_block(const SpaceTimeNetwork& net, int32_t train,
                        std::span<const double> costs, uint64_t seed,
                        const DpFilter* filter = nullptr);

// Solves all blocks with per-train cost spans taken from `all_costs` (flat
// array aligned with the network's train-arc slots).  Seeds are derived per
// train so the result is independent of the execution order.  The parallel
// variant distributes trains over OpenMP threads; the serial variant is the
// reference implementation.
void solve_blocks_serial(const SpaceTimeNetwork& net, std::span<const double> all_costs,
                         uint64_t seed, std::vector<BlockResult>& out);
void solve_blocks_parallel(const SpaceTimeNetwork& net, std::span<const double> all_costs,
                           uint64_t seed, std::vector<BlockResult>& out, int threads);

}  // namespace tps
