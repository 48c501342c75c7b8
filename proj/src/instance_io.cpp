#include "tps/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tps/oracle.hpp"

namespace tps {

using json = nlohmann::json;

namespace {

json window_to_json(const ShiftWindow& w) { return json::array({w.lo_s, w.hi_s}); }

ShiftWindow window_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error("shift window must be a [lo, hi] pair");
  return {j[0].get<int>(), j[1].get<int>()};
}

std::string node_id(const Station& st, int32_t idx) { return st.nodes[idx].id; }

int need_node(const Station& st, const std::string& id, const std::string& ctx) {
  int idx = st.node_index(id);
  if (idx < 0) throw std::runtime_error(ctx + ": unknown node '" + id + "'");
  return idx;
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  const Station& st = inst.station;
  json j;
  if (!inst.name.empty()) j["name"] = inst.name;
  json& js = j["station"];
  js["interlocking"] = to_string(st.interlocking);
  js["sg_clearing"] = st.sg_clearing_s;
  js["siding_clearing"] = st.siding_clearing_s;
  js["nodes"] = json::array();
  for (const auto& n : st.nodes)
    js["nodes"].push_back({{"id", n.id}, {"kind", to_string(n.kind)}});
  js["switch_groups"] = json::array();
  for (const auto& g : st.switch_groups) js["switch_groups"].push_back(g.id);
  js["routes"] = json::array();
  for (const auto& r : st.routes) {
    json jr{{"id", r.id},
            {"kind", to_string(r.kind)},
            {"from", node_id(st, r.origin)},
            {"to", node_id(st, r.destination)},
            {"running_time", r.running_time_s}};
    jr["switch_groups"] = json::array();
    for (const auto& occ : r.sg_occupations)
      jr["switch_groups"].push_back({{"sg", st.switch_groups[occ.sg].id},
                                     {"release_offset", occ.release_offset_s}});
    js["routes"].push_back(std::move(jr));
  }
  j["grid"] = {{"horizon", inst.grid.horizon_s},
               {"macro", inst.grid.macro_s},
               {"micro", inst.grid.micro_s}};
  j["weights"] = {{"travel", inst.weights.travel}, {"shift", inst.weights.shift}};
  if (inst.balance.enabled) {
    json jb;
    if (inst.balance.cap_base >= 0) jb["cap_base"] = inst.balance.cap_base;
    jb["tolerance"] = inst.balance.tolerance;
    j["balance"] = std::move(jb);
  }
  if (!inst.outages.empty()) {
    j["outages"] = json::array();
    for (const auto& o : inst.outages)
      j["outages"].push_back(
          {{"node", node_id(st, o.node)}, {"from", o.from_s}, {"to", o.to_s}});
  }
  j["trains"] = json::array();
  for (const auto& t : inst.trains) {
    json jt{{"id", t.id},
            {"from", node_id(st, t.origin)},
            {"to", node_id(st, t.destination)},
            {"arrival", t.desired_arrival_s},
            {"departure", t.desired_departure_s},
            {"arrival_window", window_to_json(t.arrival_window)},
            {"departure_window", window_to_json(t.departure_window)},
            {"dwell_min", t.dwell_min_s},
            {"dwell_max", t.dwell_max_s},
            {"stops", t.stops}};
    if (t.cancellation_cost >= 0) jt["cancellation_cost"] = t.cancellation_cost;
    j["trains"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
  json j = json::parse(text);
  Instance inst;
  inst.name = j.value("name", "");
  const json& js = j.at("station");
  Station& st = inst.station;
  if (!parse_interlocking(js.value("interlocking", "sectional_release"), st.interlocking))
    throw std::runtime_error("station: unknown interlocking mode");
  st.sg_clearing_s = js.value("sg_clearing", 30);
  st.siding_clearing_s = js.value("siding_clearing", 30);
  for (const auto& jn : js.at("nodes")) {
    PhysicalNode n;
    n.id = jn.at("id").get<std::string>();
    if (!parse_node_kind(jn.at("kind").get<std::string>(), n.kind))
      throw std::runtime_error("node " + n.id + ": unknown kind");
    st.nodes.push_back(std::move(n));
  }
  for (const auto& jg : js.at("switch_groups"))
    st.switch_groups.push_back({jg.get<std::string>()});
  for (const auto& jr : js.at("routes")) {
    PhysicalRoute r;
    r.id = jr.at("id").get<std::string>();
    std::string kind = jr.at("kind").get<std::string>();
    if (kind == "inbound") r.kind = RouteKind::inbound;
    else if (kind == "outbound") r.kind = RouteKind::outbound;
    else throw std::runtime_error("route " + r.id + ": unknown kind");
    r.origin = need_node(st, jr.at("from").get<std::string>(), "route " + r.id);
    r.destination = need_node(st, jr.at("to").get<std::string>(), "route " + r.id);
    r.running_time_s = jr.at("running_time").get<int>();
    for (const auto& jo : jr.value("switch_groups", json::array())) {
      SgOccupation occ;
      std::string sg = jo.at("sg").get<std::string>();
      occ.sg = st.sg_index(sg);
      if (occ.sg < 0) throw std::runtime_error("route " + r.id + ": unknown switch group " + sg);
      occ.release_offset_s = jo.at("release_offset").get<int>();
      r.sg_occupations.push_back(occ);
    }
    st.routes.push_back(std::move(r));
  }
  const json& jg = j.at("grid");
  inst.grid = {jg.at("horizon").get<int>(), jg.at("macro").get<int>(),
               jg.at("micro").get<int>()};
  if (j.contains("weights"))
    inst.weights = {j["weights"].value("travel", 1.0), j["weights"].value("shift", 1.0)};
  if (j.contains("balance")) {
    inst.balance.enabled = true;
    inst.balance.cap_base = j["balance"].value("cap_base", -1);
    inst.balance.tolerance = j["balance"].value("tolerance", -1);
  }
  for (const auto& jo : j.value("outages", json::array()))
    inst.outages.push_back({static_cast<int32_t>(need_node(st, jo.at("node").get<std::string>(), "outage")),
                            jo.at("from").get<int>(), jo.at("to").get<int>()});
  for (const auto& jt : j.at("trains")) {
    Train t;
    t.id = jt.at("id").get<std::string>();
    t.origin = need_node(st, jt.at("from").get<std::string>(), "train " + t.id);
    t.destination = need_node(st, jt.at("to").get<std::string>(), "train " + t.id);
    t.desired_arrival_s = jt.at("arrival").get<int>();
    t.desired_departure_s = jt.at("departure").get<int>();
    t.arrival_window = window_from_json(jt.at("arrival_window"));
    t.departure_window = window_from_json(jt.at("departure_window"));
    t.dwell_min_s = jt.at("dwell_min").get<int>();
    t.dwell_max_s = jt.at("dwell_max").get<int>();
    t.stops = jt.at("stops").get<bool>();
    t.cancellation_cost = jt.value("cancellation_cost", -1.0);
    inst.trains.push_back(std::move(t));
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << serialize_instance(inst);
}

std::string serialize_solution(const SpaceTimeNetwork& net, const Solution& sol) {
  const Instance& in = net.instance();
  const Station& st = in.station;
  ObjectiveBreakdown obj = objective_value(net, sol);
  bool feasible = check_feasibility(net, sol).feasible();

  json j;
  j["instance"] = in.name;
  j["method"] = sol.method;
  j["feasible"] = feasible;
  j["objective"] = {{"total", obj.total},
                    {"travel_cost", obj.travel_cost},
                    {"shift_cost", obj.shift_cost},
                    {"cancellation_cost", obj.cancellation_cost},
                    {"travel_seconds", obj.travel_s},
                    {"shift_seconds", obj.shift_s},
                    {"cancelled", obj.cancelled}};
  j["bounds"] = {{"lower", sol.bounds.lower},
                 {"upper", sol.bounds.upper},
                 {"gap", sol.bounds.gap},
                 {"iterations", sol.bounds.iterations},
                 {"wall_seconds", sol.bounds.wall_s},
                 {"termination", sol.bounds.termination}};
  j["trains"] = json::array();
  for (const TrainPlan& p : sol.plans) {
    const Train& t = in.trains[p.train];
    if (p.cancelled) {
      j["trains"].push_back({{"id", t.id},
                             {"status", "cancelled"},
                             {"cost", net.cancellation_cost(p.train)}});
      continue;
    }
    const STArc& arr = net.arc(p.arcs.front());
    const STArc& dep = net.arc(p.arcs.back());
    ShiftBreakdown sb = shift_components(net, p);
    long travel = 0;
    for (int32_t a : p.arcs) travel += net.arc(a).travel_s;
    j["trains"].push_back({{"id", t.id},
                           {"status", "scheduled"},
                           {"platform", node_id(st, arr.to_node)},
                           {"inbound_route", st.routes[arr.physical].id},
                           {"outbound_route", st.routes[dep.physical].id},
                           {"arrival", arrival_time_s(net, p)},
                           {"departure", departure_time_s(net, p)},
                           {"arrival_shift", sb.arrival_shift_s},
                           {"departure_shift", sb.departure_shift_s},
                           {"travel_seconds", travel}});
  }
  return j.dump(2) + "\n";
}

void save_solution(const SpaceTimeNetwork& net, const Solution& sol,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write solution file " + path);
  out << serialize_solution(net, sol);
}

Solution load_solution(const SpaceTimeNetwork& net, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file " + path);
  json j = json::parse(in);
  const Instance& inst = net.instance();
  const Station& st = inst.station;
  const int gm = inst.grid.macro_s;

  Solution sol;
  sol.method = j.value("method", "unknown");
  if (j.contains("bounds")) {
    const json& jb = j["bounds"];
    sol.bounds = {jb.value("lower", 0.0),   jb.value("upper", 0.0),
                  jb.value("gap", 0.0),     jb.value("iterations", 0),
                  jb.value("wall_seconds", 0.0), jb.value("termination", "")};
  }
  sol.plans.resize(inst.trains.size());
  for (size_t f = 0; f < inst.trains.size(); ++f) sol.plans[f] = {static_cast<int32_t>(f), true, {}};

  for (const auto& jt : j.at("trains")) {
    std::string id = jt.at("id").get<std::string>();
    int32_t f = -1;
    for (size_t i = 0; i < inst.trains.size(); ++i)
      if (inst.trains[i].id == id) f = static_cast<int32_t>(i);
    if (f < 0) throw std::runtime_error("solution references unknown train " + id);
    if (jt.at("status").get<std::string>() == "cancelled") continue;

    int arr_s = jt.at("arrival").get<int>(), dep_s = jt.at("departure").get<int>();
    if (arr_s % gm != 0 || dep_s % gm != 0)
      throw std::runtime_error("train " + id + ": event times must align with the macro grid");
    int r_in = st.route_index(jt.at("inbound_route").get<std::string>());
    int r_out = st.route_index(jt.at("outbound_route").get<std::string>());
    if (r_in < 0 || r_out < 0)
      throw std::runtime_error("train " + id + ": unknown route in solution");
    int platform = need_node(st, jt.at("platform").get<std::string>(), "train " + id);

    auto arcs = net.train_arcs(f);
    auto find_arc = [&](ArcKind kind, int32_t physical, int32_t period,
                        bool by_end) -> int32_t {
      for (int32_t a : arcs) {
        const STArc& arc = net.arc(a);
        if (arc.kind != kind || arc.physical != physical) continue;
        if ((by_end ? arc.end_period : arc.start_period) == period) return a;
      }
      throw std::runtime_error("train " + id + ": no matching " +
                               std::string(to_string(kind)) + " arc in its network");
    };
    TrainPlan plan{f, false, {}};
    plan.arcs.push_back(find_arc(ArcKind::arrival, r_in, arr_s / gm, true));
    if (net.arc(plan.arcs.front()).to_node != platform)
      throw std::runtime_error("train " + id + ": inbound route does not reach the platform");
    for (int t = arr_s / gm; t < dep_s / gm; ++t)
      plan.arcs.push_back(find_arc(ArcKind::siding_wait, platform, t, false));
    plan.arcs.push_back(find_arc(ArcKind::departure, r_out, dep_s / gm, false));
    sol.plans[f] = std::move(plan);
  }
  return sol;
}

void write_iteration_csv(const LrResult& result, std::ostream& os) {
  os << "iteration,alpha,lb,ub,best_lb,best_ub,violated_resources,pool_size\n";
  for (const auto& row : result.log) {
    os << row.m << ',' << row.alpha << ',' << row.lb << ',';
    if (std::isfinite(row.ub)) os << row.ub;
    os << ',' << row.best_lb << ',' << row.best_ub << ',' << row.violated << ','
       << row.pool_size << '\n';
  }
}

void write_linking_csv(const SpaceTimeNetwork& net, std::ostream& os) {
  const Station& st = net.instance().station;
  const ResourceSpace& res = net.resources();
  os << "arc,arc_kind,resource_kind,space,micro_period\n";
  for (int32_t a = 1; a < static_cast<int32_t>(net.arcs().size()); ++a) {
    auto emit = [&](int32_t r) {
      MicroResource mr = res.decode(r);
      os << a << ',' << to_string(net.arc(a).kind) << ',';
      if (mr.kind == ResourceKind::switch_group)
        os << "switch_group," << st.switch_groups[mr.space].id;
      else
        os << "siding," << st.nodes[mr.space].id;
      os << ',' << mr.period << '\n';
    };
    for (int32_t r : net.sg_links(a)) emit(r);
    for (int32_t r : net.siding_links(a)) emit(r);
  }
}

}  // namespace tps
