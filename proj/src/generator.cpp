#include "tps/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "tps/rng.hpp"

namespace tps {

namespace {

std::string pad_id(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
  return buf;
}

void add_node(Station& st, const std::string& id, NodeKind kind) {
  st.nodes.push_back({id, kind});
}

void add_route(Station& st, RouteKind kind, const std::string& from,
               const std::string& to, int run,
               std::initializer_list<std::pair<const char*, int>> sgs) {
  PhysicalRoute r;
  r.kind = kind;
  r.id = (kind == RouteKind::inbound ? "in_" : "out_") + from + "_" + to;
  r.origin = st.node_index(from);
  r.destination = st.node_index(to);
  r.running_time_s = run;
  for (const auto& [sg, off] : sgs) r.sg_occupations.push_back({st.sg_index(sg), off});
  st.routes.push_back(std::move(r));
}

// Shared train synthesis: oriented relations over two lines, desired times on
// a 60 s raster, scheduled dwell preserved as the minimum dwell.
struct Relation {
  const char* entering;
  const char* leaving;
};

}  // namespace

Instance generate_virtual_station(const VirtualStationParams& p) {
  Instance inst;
  inst.name = "virtual-" + std::to_string(p.trains) + "t-s" + std::to_string(p.seed);
  inst.grid = {p.horizon_s, p.macro_s, p.micro_s};
  inst.weights = {p.w_travel, p.w_shift};

  Station& st = inst.station;
  st.name = "compact two-line hub";
  st.interlocking = p.interlocking;
  st.sg_clearing_s = p.sg_clearing_s;
  st.siding_clearing_s = p.siding_clearing_s;

  // boundary nodes: A/D 1-2 on the west throat, 3-4 on the east throat
  for (int i = 1; i <= 4; ++i) add_node(st, "A" + std::to_string(i), NodeKind::entering);
  for (int i = 1; i <= 4; ++i) add_node(st, "D" + std::to_string(i), NodeKind::leaving);
  for (int i = 1; i <= 4; ++i) add_node(st, "S" + std::to_string(i), NodeKind::siding);
  for (int i = 1; i <= 4; ++i) add_node(st, "M" + std::to_string(i), NodeKind::mainline);
  // odd switch groups on the west throat, even on the east
  for (const char* id : {"SG1", "SG2", "SG3", "SG4", "SG5", "SG6"})
    st.switch_groups.push_back({id});

  // Track groups: upper = {S1, S2, M1, M3} behind SG1/SG2, lower = {S3, S4,
  // M2, M4} behind SG5/SG6; SG3/SG4 are the crossovers between the groups.
  // Line 1 attaches to the upper throat exits, line 2 to the lower ones.
  auto in_direct = [&](const std::string& a, const std::string& s, const char* sg) {
    add_route(st, RouteKind::inbound, a, s, 60, {{sg, 30}});
  };
  auto in_cross = [&](const std::string& a, const std::string& s, const char* sg1,
                      const char* sg2, const char* sg3) {
    add_route(st, RouteKind::inbound, a, s, 90, {{sg1, 25}, {sg2, 45}, {sg3, 65}});
  };
  auto out_direct = [&](const std::string& s, const std::string& d, const char* sg) {
    add_route(st, RouteKind::outbound, s, d, 60, {{sg, 30}});
  };
  auto out_cross = [&](const std::string& s, const std::string& d, const char* sg1,
                       const char* sg2, const char* sg3) {
    add_route(st, RouteKind::outbound, s, d, 90, {{sg1, 25}, {sg2, 45}, {sg3, 65}});
  };

  // inbound: 5 per entering node
  for (const char* s : {"S1", "S2"}) in_direct("A1", s, "SG1");
  for (const char* s : {"S3", "S4"}) in_cross("A1", s, "SG1", "SG3", "SG5");
  in_direct("A1", "M1", "SG1");
  for (const char* s : {"S3", "S4"}) in_direct("A2", s, "SG5");
  for (const char* s : {"S1", "S2"}) in_cross("A2", s, "SG5", "SG3", "SG1");
  in_direct("A2", "M2", "SG5");
  for (const char* s : {"S1", "S2"}) in_direct("A3", s, "SG2");
  for (const char* s : {"S3", "S4"}) in_cross("A3", s, "SG2", "SG4", "SG6");
  in_direct("A3", "M3", "SG2");
  for (const char* s : {"S3", "S4"}) in_direct("A4", s, "SG6");
  for (const char* s : {"S1", "S2"}) in_cross("A4", s, "SG6", "SG4", "SG2");
  in_direct("A4", "M4", "SG6");

  // outbound: every siding reaches every leaving node, mainlines their own
  for (const char* s : {"S1", "S2"}) {
    out_direct(s, "D1", "SG1");
    out_cross(s, "D2", "SG1", "SG3", "SG5");
    out_direct(s, "D3", "SG2");
    out_cross(s, "D4", "SG2", "SG4", "SG6");
  }
  for (const char* s : {"S3", "S4"}) {
    out_cross(s, "D1", "SG5", "SG3", "SG1");
    out_direct(s, "D2", "SG5");
    out_cross(s, "D3", "SG6", "SG4", "SG2");
    out_direct(s, "D4", "SG6");
  }
  out_direct("M1", "D3", "SG2");
  out_direct("M2", "D4", "SG6");
  out_direct("M3", "D1", "SG1");
  out_direct("M4", "D2", "SG5");

  // trains
  const Relation rel[2][2] = {{{"A1", "D3"}, {"A2", "D4"}},   // eastbound line 1 / 2
                              {{"A3", "D1"}, {"A4", "D2"}}};  // westbound line 1 / 2
  const int lo = 300, hi = p.horizon_s - 900;
  if (hi < lo) throw std::runtime_error("horizon too short for train synthesis");
  std::mt19937_64 gen(derive_seed(p.seed, 0x7EA1));
  for (int i = 0; i < p.trains; ++i) {
    Train t;
    t.id = pad_id("T", i + 1, 2);
    int dir = static_cast<int>(draw(gen, 2));
    int line = static_cast<int>(draw(gen, 2));
    t.origin = st.node_index(rel[dir][line].entering);
    t.destination = st.node_index(rel[dir][line].leaving);
    t.stops = draw_real(gen) >= p.nonstop_share;
    t.desired_arrival_s = 60 * draw_int(gen, lo / 60, hi / 60);
    if (t.stops) {
      int dwell = 60 * draw_int(gen, 2, 5);
      t.dwell_min_s = dwell;
      t.dwell_max_s = dwell + 300;
      t.desired_departure_s = t.desired_arrival_s + dwell;
      t.arrival_window = {-120, 120};
      t.departure_window = {-120, 420};
    } else {
      t.dwell_min_s = t.dwell_max_s = 0;
      t.desired_departure_s = t.desired_arrival_s;
      t.arrival_window = {-120, 120};
      t.departure_window = {-120, 120};
    }
    inst.trains.push_back(std::move(t));
  }
  return inst;
}

Instance generate_large_station(const LargeStationParams& p) {
  Instance inst;
  inst.name = "large-" + std::to_string(p.trains) + "t-s" + std::to_string(p.seed);
  inst.grid = {p.horizon_s, p.macro_s, p.micro_s};
  inst.weights = {p.w_travel, p.w_shift};

  Station& st = inst.station;
  st.name = "two-line hub, twelve sidings";
  st.interlocking = p.interlocking;
  st.sg_clearing_s = p.sg_clearing_s;
  st.siding_clearing_s = p.siding_clearing_s;

  for (int i = 1; i <= 4; ++i) add_node(st, "A" + std::to_string(i), NodeKind::entering);
  for (int i = 1; i <= 4; ++i) add_node(st, "D" + std::to_string(i), NodeKind::leaving);
  for (int i = 1; i <= 12; ++i) add_node(st, "S" + std::to_string(i), NodeKind::siding);
  for (int i = 1; i <= 4; ++i) add_node(st, "M" + std::to_string(i), NodeKind::mainline);
  for (int i = 1; i <= 10; ++i) st.switch_groups.push_back({"SG" + std::to_string(i)});

  // Upper fan: S1 (outermost) .. S6 (next to the through tracks), served by
  // SG1/SG3 from the west and SG2/SG4 from the east.  Lower fan mirrored:
  // S7 (innermost) .. S12, behind SG9/SG7 west and SG10/SG8 east.  SG5/SG6
  // are the west/east crossovers between the fans.
  auto fan_depth = [](int s) { return s <= 6 ? 7 - s : s - 6; };  // 1 = innermost
  auto upper = [](int s) { return s <= 6; };

  for (int s = 1; s <= 12; ++s) {
    std::string sid = "S" + std::to_string(s);
    int run_same = 60 + 6 * fan_depth(s);
    int run_cross = 90 + 6 * fan_depth(s);
    if (upper(s)) {
      add_route(st, RouteKind::inbound, "A1", sid, run_same, {{"SG1", 20}, {"SG3", 45}});
      add_route(st, RouteKind::inbound, "A3", sid, run_same, {{"SG2", 20}, {"SG4", 45}});
      add_route(st, RouteKind::inbound, "A2", sid, run_cross,
                {{"SG9", 20}, {"SG5", 50}, {"SG3", 75}});
      add_route(st, RouteKind::inbound, "A4", sid, run_cross,
                {{"SG10", 20}, {"SG6", 50}, {"SG4", 75}});
      add_route(st, RouteKind::outbound, sid, "D1", run_same, {{"SG3", 20}, {"SG1", 45}});
      add_route(st, RouteKind::outbound, sid, "D3", run_same, {{"SG4", 20}, {"SG2", 45}});
      add_route(st, RouteKind::outbound, sid, "D2", run_cross,
                {{"SG3", 20}, {"SG5", 50}, {"SG9", 75}});
      add_route(st, RouteKind::outbound, sid, "D4", run_cross,
                {{"SG4", 20}, {"SG6", 50}, {"SG10", 75}});
    } else {
      add_route(st, RouteKind::inbound, "A2", sid, run_same, {{"SG9", 20}, {"SG7", 45}});
      add_route(st, RouteKind::inbound, "A4", sid, run_same, {{"SG10", 20}, {"SG8", 45}});
      add_route(st, RouteKind::inbound, "A1", sid, run_cross,
                {{"SG1", 20}, {"SG5", 50}, {"SG7", 75}});
      add_route(st, RouteKind::inbound, "A3", sid, run_cross,
                {{"SG2", 20}, {"SG6", 50}, {"SG8", 75}});
      add_route(st, RouteKind::outbound, sid, "D2", run_same, {{"SG7", 20}, {"SG9", 45}});
      add_route(st, RouteKind::outbound, sid, "D4", run_same, {{"SG8", 20}, {"SG10", 45}});
      add_route(st, RouteKind::outbound, sid, "D1", run_cross,
                {{"SG7", 20}, {"SG5", 50}, {"SG1", 75}});
      add_route(st, RouteKind::outbound, sid, "D3", run_cross,
                {{"SG8", 20}, {"SG6", 50}, {"SG2", 75}});
    }
  }
  add_route(st, RouteKind::inbound, "A1", "M1", 70, {{"SG1", 20}, {"SG3", 40}});
  add_route(st, RouteKind::outbound, "M1", "D3", 70, {{"SG4", 20}, {"SG2", 40}});
  add_route(st, RouteKind::inbound, "A3", "M3", 70, {{"SG2", 20}, {"SG4", 40}});
  add_route(st, RouteKind::outbound, "M3", "D1", 70, {{"SG3", 20}, {"SG1", 40}});
  add_route(st, RouteKind::inbound, "A2", "M2", 70, {{"SG9", 20}, {"SG7", 40}});
  add_route(st, RouteKind::outbound, "M2", "D4", 70, {{"SG8", 20}, {"SG10", 40}});
  add_route(st, RouteKind::inbound, "A4", "M4", 70, {{"SG10", 20}, {"SG8", 40}});
  add_route(st, RouteKind::outbound, "M4", "D2", 70, {{"SG7", 20}, {"SG9", 40}});

  const Relation rel[2][2] = {{{"A1", "D3"}, {"A2", "D4"}},
                              {{"A3", "D1"}, {"A4", "D2"}}};
  int first = p.first_train_s >= 0 ? p.first_train_s : 1800;
  int last = p.last_train_s >= 0 ? p.last_train_s : p.horizon_s - 3600;
  if (last < first) throw std::runtime_error("train window empty");
  std::mt19937_64 gen(derive_seed(p.seed, 0x1A26E));
  for (int i = 0; i < p.trains; ++i) {
    Train t;
    t.id = pad_id("T", i + 1, 3);
    int dir = static_cast<int>(draw(gen, 2));
    int line = static_cast<int>(draw(gen, 2));
    t.origin = st.node_index(rel[dir][line].entering);
    t.destination = st.node_index(rel[dir][line].leaving);
    t.stops = draw_real(gen) >= p.nonstop_share;
    t.desired_arrival_s = 60 * draw_int(gen, first / 60, last / 60);
    if (t.stops) {
      bool long_stop = draw_real(gen) < p.long_dwell_share;
      int dwell = long_stop ? 60 * draw_int(gen, 10, 20) : 60 * draw_int(gen, 2, 6);
      t.dwell_min_s = dwell;
      t.dwell_max_s = dwell + 300;
      t.desired_departure_s = t.desired_arrival_s + dwell;
      t.arrival_window = {-120, 120};
      t.departure_window = {-120, 420};
    } else {
      t.dwell_min_s = t.dwell_max_s = 0;
      t.desired_departure_s = t.desired_arrival_s;
      t.arrival_window = {-120, 120};
      t.departure_window = {-120, 120};
    }
    inst.trains.push_back(std::move(t));
  }
  return inst;
}

Instance perturb_delays(const Instance& inst, const DelayScenario& sc) {
  Instance out = inst;
  out.name = inst.name + "-delays";
  std::mt19937_64 gen(derive_seed(sc.seed, 0xDE1A));
  int steps = std::max(1, sc.max_delay_s / 60);
  for (Train& t : out.trains) {
    if (t.desired_arrival_s < sc.from_s || t.desired_arrival_s >= sc.to_s) continue;
    int delay = 60 * draw_int(gen, 1, steps);
    t.desired_arrival_s += delay;
    t.desired_departure_s += delay;
    int slack = t.dwell_max_s - t.dwell_min_s;
    t.arrival_window = {0, delay + 300};
    t.departure_window = {0, delay + 300 + slack};
    // clamp to the horizon; validation reports trains pushed outside
    t.arrival_window.hi_s =
        std::min(t.arrival_window.hi_s, inst.grid.horizon_s - t.desired_arrival_s);
    t.departure_window.hi_s =
        std::min(t.departure_window.hi_s, inst.grid.horizon_s - t.desired_departure_s);
  }
  return out;
}

Instance perturb_outage(const Instance& inst, const std::string& node_id, int from_s,
                        int to_s) {
  Instance out = inst;
  out.name = inst.name + "-outage";
  int node = inst.station.node_index(node_id);
  if (node < 0) throw std::runtime_error("outage: unknown node '" + node_id + "'");
  out.outages.push_back({node, from_s, to_s < 0 ? inst.grid.horizon_s : to_s});
  return out;
}

}  // namespace tps
