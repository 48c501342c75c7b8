#include "tps/station.hpp"

#include <algorithm>
#include <unordered_set>

namespace tps {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::entering: return "entering";
    case NodeKind::leaving: return "leaving";
    case NodeKind::siding: return "siding";
    case NodeKind::mainline: return "mainline";
  }
  return "?";
}

const char* to_string(RouteKind k) {
  return k == RouteKind::inbound ? "inbound" : "outbound";
}

const char* to_string(InterlockingMode m) {
  return m == InterlockingMode::sectional_release ? "sectional_release" : "route_release";
}

bool parse_node_kind(const std::string& s, NodeKind& out) {
  if (s == "entering") out = NodeKind::entering;
  else if (s == "leaving") out = NodeKind::leaving;
  else if (s == "siding") out = NodeKind::siding;
  else if (s == "mainline") out = NodeKind::mainline;
  else return false;
  return true;
}

bool parse_interlocking(const std::string& s, InterlockingMode& out) {
  if (s == "sectional_release" || s == "sectional") out = InterlockingMode::sectional_release;
  else if (s == "route_release" || s == "route") out = InterlockingMode::route_release;
  else return false;
  return true;
}

int Station::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

int Station::sg_index(const std::string& id) const {
  for (size_t i = 0; i < switch_groups.size(); ++i)
    if (switch_groups[i].id == id) return static_cast<int>(i);
  return -1;
}

int Station::route_index(const std::string& id) const {
  for (size_t i = 0; i < routes.size(); ++i)
    if (routes[i].id == id) return static_cast<int>(i);
  return -1;
}

bool Station::is_platform(int32_t node) const {
  if (node < 0 || node >= static_cast<int32_t>(nodes.size())) return false;
  NodeKind k = nodes[node].kind;
  return k == NodeKind::siding || k == NodeKind::mainline;
}

std::vector<int32_t> Station::siding_nodes() const {
  std::vector<int32_t> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == NodeKind::siding) out.push_back(static_cast<int32_t>(i));
  return out;
}

int effective_sg_offset(const PhysicalRoute& route, const SgOccupation& occ,
                        InterlockingMode mode) {
  return mode == InterlockingMode::route_release ? route.running_time_s
                                                 : occ.release_offset_s;
}

std::vector<Violation> validate_station(const Station& st) {
  std::vector<Violation> out;
  auto bad = [&](const std::string& el, const std::string& msg) {
    out.push_back({el, msg});
  };

  if (st.sg_clearing_s < 0) bad(st.name, "negative switch-group clearing time");
  if (st.siding_clearing_s < 0) bad(st.name, "negative siding clearing time");

  std::unordered_set<std::string> seen;
  for (const auto& n : st.nodes)
    if (!seen.insert(n.id).second) bad(n.id, "duplicate node id");
  seen.clear();
  for (const auto& g : st.switch_groups)
    if (!seen.insert(g.id).second) bad(g.id, "duplicate switch group id");
  seen.clear();
  for (const auto& r : st.routes)
    if (!seen.insert(r.id).second) bad(r.id, "duplicate route id");

  const int32_t n_nodes = static_cast<int32_t>(st.nodes.size());
  const int32_t n_sg = static_cast<int32_t>(st.switch_groups.size());
  for (const auto& r : st.routes) {
    if (r.running_time_s <= 0) bad(r.id, "running time must be positive");
    if (r.origin < 0 || r.origin >= n_nodes || r.destination < 0 ||
        r.destination >= n_nodes) {
      bad(r.id, "route endpoint refers to an unknown node");
      continue;
    }
    NodeKind from = st.nodes[r.origin].kind;
    NodeKind to = st.nodes[r.destination].kind;
    if (r.kind == RouteKind::inbound) {
      if (from != NodeKind::entering)
        bad(r.id, "inbound route must start at an entering node");
      if (to != NodeKind::siding && to != NodeKind::mainline)
        bad(r.id, "inbound route must end at a platform track");
    } else {
      if (from != NodeKind::siding && from != NodeKind::mainline)
        bad(r.id, "outbound route must start at a platform track");
      if (to != NodeKind::leaving)
        bad(r.id, "outbound route must end at a leaving node");
    }
    for (const auto& occ : r.sg_occupations) {
      if (occ.sg < 0 || occ.sg >= n_sg) {
        bad(r.id, "route crosses an unknown switch group");
        continue;
      }
      if (occ.release_offset_s <= 0 || occ.release_offset_s > r.running_time_s)
        bad(r.id, "switch group release offset outside (0, running_time] for " +
                      st.switch_groups[occ.sg].id);
    }
  }
  return out;
}

}  // namespace tps
