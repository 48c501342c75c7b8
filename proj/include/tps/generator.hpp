#pragma once
// Built-in instance generators and perturbation scenarios.

#include <cstdint>
#include <string>

#include "tps/instance.hpp"

namespace tps {

// Compact two-line hub: 4 sidings + 4 mainlines, 4 entering / 4 leaving
// nodes, 6 switch groups (odd ids on the west throat, even ids on the east),
// 20 inbound and 20 outbound routes.  Stopping trains may use any siding;
// each mainline serves exactly one nonstop relation end to end.
struct VirtualStationParams {
  int trains = 8;
  uint64_t seed = 1;
  int horizon_s = 2400;
  int macro_s = 15;
  int micro_s = 15;
  int sg_clearing_s = 30;
  int siding_clearing_s = 30;
  InterlockingMode interlocking = InterlockingMode::sectional_release;
  double w_travel = 1.0;
  double w_shift = 1.0;
  double nonstop_share = 0.25;
};
Instance generate_virtual_station(const VirtualStationParams& p);

// Scaled-up hub: 12 sidings + 4 mainlines, 10 switch groups, running times
// graded by how far a siding sits from the through tracks (so unbalanced
// plans are cheaper and balancing has something to do).
struct LargeStationParams {
  int trains = 287;
  uint64_t seed = 1;
  int horizon_s = 72000;  // full service day
  int first_train_s = -1;   // < 0: spread over [1800, horizon - 3600]
  int last_train_s = -1;
  int macro_s = 15;
  int micro_s = 15;
  int sg_clearing_s = 30;
  int siding_clearing_s = 30;
  InterlockingMode interlocking = InterlockingMode::sectional_release;
  double w_travel = 1.0;
  double w_shift = 1.0;
  double nonstop_share = 0.15;
  double long_dwell_share = 0.3;  // originating/terminating-style long stops
};
Instance generate_large_station(const LargeStationParams& p);

// Delay scenario: every train whose desired arrival falls in [from_s, to_s)
// receives a random delay in (0, max_delay_s]; its desired times shift by the
// delay and its shift windows become [0, delay + 300].
struct DelayScenario {
  int from_s = 0;
  int to_s = 0;
  int max_delay_s = 600;
  uint64_t seed = 1;
};
Instance perturb_delays(const Instance& inst, const DelayScenario& sc);

// Outage scenario: platform `node_id` is unavailable during [from_s, to_s).
Instance perturb_outage(const Instance& inst, const std::string& node_id, int from_s,
                        int to_s);

}  // namespace tps
