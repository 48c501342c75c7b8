#pragma once
// A solvable problem instance: station + planning grid + trains + weights.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tps/station.hpp"

namespace tps {

// Discretization of the planning horizon.  Macroscopic periods carry the
// routing/timing decisions, microscopic periods carry the track-capacity
// resources.  Both granularities divide the horizon; they may differ.
struct TimeGrid {
  int horizon_s = 2400;
  int macro_s = 15;
  int micro_s = 15;

  int macro_periods() const { return horizon_s / macro_s; }
  int micro_periods() const { return horizon_s / micro_s; }
};

// Allowed deviation from a desired event time, as signed offsets in seconds.
struct ShiftWindow {
  int lo_s = 0;
  int hi_s = 0;
};

struct Train {
  std::string id;
  int32_t origin = -1;       // entering node index
  int32_t destination = -1;  // leaving node index
  int desired_arrival_s = 0;
  int desired_departure_s = 0;
  ShiftWindow arrival_window;
  ShiftWindow departure_window;
  int dwell_min_s = 0;
  int dwell_max_s = 0;
  bool stops = true;
  // Penalty for dropping the train from the plan; < 0 means "derive default".
  double cancellation_cost = -1.0;
};

struct Weights {
  double travel = 1.0;
  double shift = 1.0;
};

// Platform-usage balancing.  When enabled with a finite tolerance, no siding
// may receive more than cap_base + tolerance trains (hard constraint); the
// soft mode (tolerance < 0) only steers the relaxation via multipliers.
struct BalanceConfig {
  bool enabled = false;
  int cap_base = -1;    // < 0: derive as ceil(#stopping trains / #sidings)
  int tolerance = -1;   // < 0: unlimited (soft balancing only)
};

// A platform node is unavailable during [from_s, to_s).
struct Outage {
  int32_t node = -1;
  int from_s = 0;
  int to_s = 0;
};

struct Instance {
  std::string name;
  Station station;
  TimeGrid grid;
  Weights weights;
  std::vector<Train> trains;
  BalanceConfig balance;
  std::vector<Outage> outages;

  // True when every cost coefficient is integral, so any two distinct
  // attainable objective values differ by at least 1.
  bool integral_costs() const;
  int derived_cap_base() const;
  double train_cancellation_cost(const Train& t) const;
};

// Station validation plus grid divisibility, train windows inside the
// horizon, dwell bounds, boundary-node kinds and outage references.
std::vector<Violation> validate_instance(const Instance& inst);

}  // namespace tps
