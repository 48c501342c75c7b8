#pragma once
// SVG resource-occupation chart of a plan.

#include <iosfwd>

#include "tps/network.hpp"
#include "tps/solution.hpp"

namespace tps {

// One row per switch group and siding, colored blocks per train; dwell
// occupations solid, inbound locks hatched light, clearing blocks outlined.
// Output is byte-identical across runs for the same input.
void emit_gantt(std::ostream& os, const SpaceTimeNetwork& net, const Solution& sol);

}  // namespace tps
