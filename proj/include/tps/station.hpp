#pragma once
// Physical station model: nodes, switch groups, routes and interlocking modes.
//
// A station is a set of platform tracks (sidings that can host dwelling
// trains, mainlines that only pass nonstop traffic) connected to boundary
// nodes (entering / leaving) by physical routes.  Every route crosses a
// sequence of switch groups; each crossing is described by the elapsed time
// from the start of the route until the switch group is released.

#include <cstdint>
#include <string>
#include <vector>

namespace tps {

enum class NodeKind : uint8_t { entering, leaving, siding, mainline };
enum class RouteKind : uint8_t { inbound, outbound };
enum class InterlockingMode : uint8_t { sectional_release, route_release };

const char* to_string(NodeKind k);
const char* to_string(RouteKind k);
const char* to_string(InterlockingMode m);
bool parse_node_kind(const std::string& s, NodeKind& out);
bool parse_interlocking(const std::string& s, InterlockingMode& out);

struct PhysicalNode {
  std::string id;
  NodeKind kind = NodeKind::siding;
};

struct SwitchGroup {
  std::string id;
};

// One switch-group crossing of a route.  `release_offset_s` is the elapsed
// time in seconds from the moment the train enters the route until the
// switch group is physically cleared (sectional release point).
struct SgOccupation {
  int32_t sg = -1;
  int release_offset_s = 0;
};

struct PhysicalRoute {
  std::string id;
  RouteKind kind = RouteKind::inbound;
  int32_t origin = -1;       // node index
  int32_t destination = -1;  // node index
  int running_time_s = 0;
  std::vector<SgOccupation> sg_occupations;
};

struct Station {
  std::string name;
  InterlockingMode interlocking = InterlockingMode::sectional_release;
  int sg_clearing_s = 30;      // extra clearing time after a switch group is released
  int siding_clearing_s = 30;  // clearing time a departing train leaves behind on its siding
  std::vector<PhysicalNode> nodes;
  std::vector<SwitchGroup> switch_groups;
  std::vector<PhysicalRoute> routes;

  int node_index(const std::string& id) const;
  int sg_index(const std::string& id) const;
  int route_index(const std::string& id) const;
  bool is_platform(int32_t node) const;
  // Node indices of all sidings, in declaration order.  The position in this
  // list is the siding ordinal used by the resource space.
  std::vector<int32_t> siding_nodes() const;
};

// Elapsed seconds from route start until the given switch group is released,
// taking the interlocking mode into account.  Under sectional release every
// switch group frees up at its own crossing offset; under route release all
// switch groups of the route stay locked until the full route is completed.
int effective_sg_offset(const PhysicalRoute& route, const SgOccupation& occ,
                        InterlockingMode mode);

struct Violation {
  std::string element;
  std::string message;
};

// Structural validation of the station: dangling references, bad route
// endpoints for the declared route kind, release offsets outside
// (0, running_time], duplicate identifiers, negative clearing times.
std::vector<Violation> validate_station(const Station& st);

}  // namespace tps
