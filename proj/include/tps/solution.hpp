#pragma once
// Plans, objective evaluation and timing queries.

#include <optional>
#include <string>
#include <vector>

#include "tps/network.hpp"

namespace tps {

struct BoundsSummary {
  double lower = 0;
  double upper = 0;
  double gap = 0;         // (upper - lower) / upper, clamped at 0
  int iterations = 0;
  double wall_s = 0;
  std::string termination;  // gap / integral / optimal / max_iterations / time_limit
};

struct Solution {
  std::vector<TrainPlan> plans;  // one per train, index == train index
  BoundsSummary bounds;
  std::string method;
};

struct ShiftBreakdown {
  int arrival_shift_s = 0;    // |arrival - desired arrival|
  int departure_shift_s = 0;  // |departure - desired departure|
};

struct ObjectiveBreakdown {
  double travel_cost = 0;
  double shift_cost = 0;
  double cancellation_cost = 0;
  double total = 0;
  long travel_s = 0;
  long shift_s = 0;
  int cancelled = 0;
};

// Event times of a scheduled plan, in seconds.  Throws on cancelled plans.
int arrival_time_s(const SpaceTimeNetwork& net, const TrainPlan& plan);
int departure_time_s(const SpaceTimeNetwork& net, const TrainPlan& plan);
int platform_node(const SpaceTimeNetwork& net, const TrainPlan& plan);

ShiftBreakdown shift_components(const SpaceTimeNetwork& net, const TrainPlan& plan);

// Validates the structure of every plan (arcs belong to the train, form a
// contiguous arrival-wait-departure chain, respect dwell bounds) and returns
// the weighted objective.  Throws std::runtime_error on malformed plans.
ObjectiveBreakdown objective_value(const SpaceTimeNetwork& net, const Solution& sol);

// Objective of a single plan (same validation).
double plan_cost(const SpaceTimeNetwork& net, const TrainPlan& plan);

}  // namespace tps
