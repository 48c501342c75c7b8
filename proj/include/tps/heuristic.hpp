#pragma once
// Feasibility heuristic: repair a relaxed (conflicting) plan into a
// conflict-free one by scheduling trains sequentially.

#include <cstdint>
#include <span>
#include <vector>

#include "tps/network.hpp"
#include "tps/solution.hpp"

namespace tps {

// For each train, the number of other trains sharing at least one
// over-occupied micro resource with it in the given plans.
std::vector<int32_t> conflict_counts(const SpaceTimeNetwork& net,
                                     const std::vector<TrainPlan>& plans);

// Train order for sequential scheduling: ascending conflict count, ties
// shuffled with the seeded generator.
std::vector<int32_t> priority_order(std::span<const int32_t> conflicts, uint64_t seed);

// Schedules trains one by one in the given order.  Each train receives its
// cheapest path under raw (multiplier-free) costs among the arcs whose linked
// resources are still unclaimed; the chosen path's resources are then
// claimed.  Trains without any remaining physical path are cancelled.  With
// balance_cap >= 0 a siding that reached cap arrivals rejects further trains.
Solution schedule_sequentially(const SpaceTimeNetwork& net,
                               std::span<const int32_t> order, uint64_t seed,
                               int32_t balance_cap = -1);

}  // namespace tps
