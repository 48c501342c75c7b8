#pragma once
// Test-side ground truth, written independently of the library internals:
//   * linking sets recomputed by real-time interval simulation over every
//     micro period;
//   * per-train optima recomputed by exhaustive path enumeration;
//   * small hand-built stations.

#include <span>
#include <string>
#include <vector>

#include "tps/instance.hpp"
#include "tps/network.hpp"
#include "tps/train_dp.hpp"

namespace tps::test {

struct LinkSets {
  std::vector<int32_t> sg;      // sorted unique switch-group resources
  std::vector<int32_t> siding;  // sorted unique siding resources
};

// Recomputes the micro resources linked to an arc from station data alone:
// builds the arc's real-time occupation intervals and scans all micro
// periods for overlap with [p * micro_s, (p + 1) * micro_s).
LinkSets simulate_links(const SpaceTimeNetwork& net, int32_t arc);

struct EnumeratedPath {
  double cost = 0;
  std::vector<int32_t> arcs;  // global ids: arrival, waits..., departure
};

struct EnumerationResult {
  std::vector<EnumeratedPath> paths;  // every physical path that survives the filter
  double best_physical = 0;           // +inf when paths is empty
  double virtual_cost = 0;
};

// Enumerates every arrival x dwell x departure combination of the train from
// the raw arc table (no use of the block adjacency), pricing slots with
// `costs` and honoring the same filter semantics as the block solver.
EnumerationResult enumerate_paths(const SpaceTimeNetwork& net, int32_t train,
                                  std::span<const double> costs,
                                  const DpFilter* filter = nullptr);

// Compares a block-solver result against exhaustive enumeration.  Returns an
// empty string when consistent, otherwise a diagnostic message.
std::string check_block_result(const SpaceTimeNetwork& net, int32_t train,
                               std::span<const double> costs, const DpFilter* filter,
                               const BlockResult& got);

// Hand-built station: entering E, leaving L, sidings P1 P2, mainline M,
// switch groups GA (inbound side) and GB (outbound side).
Station two_siding_station();

// Instance around two_siding_station(): 1200 s horizon, 15 s periods, unit
// weights, no trains.
Instance two_siding_instance();

// stops: dwell 60..600, arrival window [-120, 120], departure [-120, 300];
// nonstop: dwell 0, both windows [-120, 120] (pass dep_s == arr_s).
Train make_train(const Station& st, const std::string& id, const std::string& from,
                 const std::string& to, int arr_s, int dep_s, bool stops);

}  // namespace tps::test
