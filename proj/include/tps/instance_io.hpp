#pragma once
// JSON serialization of instances and solutions, CSV exports.

#include <iosfwd>
#include <string>

#include "tps/instance.hpp"
#include "tps/lr.hpp"
#include "tps/solution.hpp"

namespace tps {

std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& json_text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

std::string serialize_solution(const SpaceTimeNetwork& net, const Solution& sol);
void save_solution(const SpaceTimeNetwork& net, const Solution& sol,
                   const std::string& path);

// Rebuilds plans from a solution file against the given network (routes and
// times must match arcs of the train).  Throws std::runtime_error with the
// offending train id on mismatch.
Solution load_solution(const SpaceTimeNetwork& net, const std::string& path);

void write_iteration_csv(const LrResult& result, std::ostream& os);

// Debug dump of every linking set: arc id, arc kind, resource kind, space id,
// micro period -- one row per (arc, resource) pair.
void write_linking_csv(const SpaceTimeNetwork& net, std::ostream& os);

}  // namespace tps
