#include "tps/network.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tps {

const char* to_string(ArcKind k) {
  switch (k) {
    case ArcKind::source: return "source";
    case ArcKind::sink: return "sink";
    case ArcKind::arrival: return "arrival";
    case ArcKind::departure: return "departure";
    case ArcKind::siding_wait: return "siding_wait";
    case ArcKind::virtual_path: return "virtual";
  }
  return "?";
}

MicroResource ResourceSpace::decode(int32_t r) const {
  int32_t space = r / micro_periods;
  int32_t p = r % micro_periods;
  if (space < n_sg) return {ResourceKind::switch_group, space, p};
  return {ResourceKind::siding, sidings[space - n_sg], p};
}

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

uint64_t arc_key(ArcKind k, int32_t physical, int32_t start) {
  return (static_cast<uint64_t>(k) << 48) |
         (static_cast<uint64_t>(static_cast<uint32_t>(physical) & 0xffffff) << 24) |
         (static_cast<uint32_t>(start) & 0xffffff);
}

// Appends every micro period whose interval intersects [from_s, to_s).
void push_micro_range(int from_s, int to_s, int micro_s, int micro_periods,
                      int32_t base, std::vector<int32_t>& out) {
  if (to_s <= from_s) return;
  int lo = from_s / micro_s;
  int hi = std::min(ceil_div(to_s, micro_s), micro_periods);
  for (int p = lo; p < hi; ++p) out.push_back(base + p);
}

struct ArcTableBuilder {
  std::vector<STArc> arcs;
  std::unordered_map<uint64_t, int32_t> index;

  int32_t intern(const STArc& a) {
    uint64_t key = arc_key(a.kind, a.physical, a.start_period);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int32_t id = static_cast<int32_t>(arcs.size());
    arcs.push_back(a);
    index.emplace(key, id);
    return id;
  }
};

}  // namespace

void Occupation::dedup_within_types() {
  auto uniq = [](std::vector<int32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(sg);
  uniq(siding_dwell);
  uniq(siding_lock);
  uniq(siding_clear);
}

bool SpaceTimeNetwork::train_has_arc(int32_t f, int32_t arc) const {
  auto span = train_arcs(f);
  return std::find(span.begin(), span.end(), arc) != span.end();
}

SpaceTimeNetwork build_network(const Instance& inst, int threads) {
  {
    auto violations = validate_instance(inst);
    if (!violations.empty())
      throw std::runtime_error("invalid instance: " + violations.front().element + ": " +
                               violations.front().message);
  }
  SpaceTimeNetwork net(inst);
  const Instance& in = net.instance();
  const Station& st = in.station;
  const TimeGrid& grid = in.grid;
  const int gm = grid.macro_s;
  const int TM = grid.macro_periods();

  // ---- resource space ------------------------------------------------------
  ResourceSpace& res = net.res_;
  res.micro_periods = grid.micro_periods();
  res.n_sg = static_cast<int32_t>(st.switch_groups.size());
  res.sidings = st.siding_nodes();
  res.siding_ordinal.assign(st.nodes.size(), -1);
  for (size_t i = 0; i < res.sidings.size(); ++i)
    res.siding_ordinal[res.sidings[i]] = static_cast<int32_t>(i);

  // ---- route lookup by endpoints -------------------------------------------
  const int32_t n_nodes = static_cast<int32_t>(st.nodes.size());
  std::vector<std::vector<std::vector<int32_t>>> in_routes(
      n_nodes, std::vector<std::vector<int32_t>>(n_nodes));
  std::vector<std::vector<std::vector<int32_t>>> out_routes(
      n_nodes, std::vector<std::vector<int32_t>>(n_nodes));
  for (size_t r = 0; r < st.routes.size(); ++r) {
    const auto& route = st.routes[r];
    auto& slot = route.kind == RouteKind::inbound
                     ? in_routes[route.origin][route.destination]
                     : out_routes[route.origin][route.destination];
    slot.push_back(static_cast<int32_t>(r));
  }

  auto outage_blocked = [&](int32_t node, int from_s, int to_s) {
    for (const auto& o : in.outages)
      if (o.node == node && from_s < o.to_s && to_s > o.from_s) return true;
    return false;
  };

  // ---- arcs, per train ------------------------------------------------------
  ArcTableBuilder table;
  table.intern({ArcKind::virtual_path, -1, -1, -1, 0, 0, 0});  // shared id 0

  const int32_t F = static_cast<int32_t>(in.trains.size());
  net.train_off_.assign(F + 1, 0);
  net.cancel_cost_.resize(F);
  net.blocks_.resize(F);

  for (int32_t f = 0; f < F; ++f) {
    const Train& t = in.trains[f];
    net.cancel_cost_[f] = in.train_cancellation_cost(t);

    // Platforms that have both an inbound and an outbound route for this
    // train; stopping trains use sidings, nonstop trains use mainlines.
    std::vector<int32_t> platforms;
    for (int32_t p = 0; p < n_nodes; ++p) {
      NodeKind k = st.nodes[p].kind;
      bool ok_kind = t.stops ? k == NodeKind::siding : k == NodeKind::mainline;
      if (ok_kind && !in_routes[t.origin][p].empty() &&
          !out_routes[p][t.destination].empty())
        platforms.push_back(p);
    }

    const int a_lo = t.desired_arrival_s + t.arrival_window.lo_s;
    const int a_hi = t.desired_arrival_s + t.arrival_window.hi_s;
    const int d_lo = t.desired_departure_s + t.departure_window.lo_s;
    const int d_hi = t.desired_departure_s + t.departure_window.hi_s;
    const int tau_lo = ceil_div(a_lo, gm), tau_hi = a_hi / gm;      // arrival periods
    const int sig_lo = ceil_div(d_lo, gm), sig_hi = d_hi / gm;      // departure periods

    TrainBlock& block = net.blocks_[f];
    block.dwell_min_p = ceil_div(t.dwell_min_s, gm);
    block.dwell_max_p = t.dwell_max_s / gm;

    std::vector<int32_t> slots;          // global arc ids in slot order
    std::vector<double> slot_costs;
    const double w1 = in.weights.travel, w2 = in.weights.shift;

    struct PlatformTmp {
      int32_t node;
      std::vector<std::pair<int32_t, int32_t>> waits;             // (period, global id)
      std::vector<std::pair<int32_t, int32_t>> deps;              // (period, global id)
    };
    std::vector<PlatformTmp> ptmp;

    for (int32_t p : platforms) {
      PlatformTmp pt{p, {}, {}};
      bool siding = st.nodes[p].kind == NodeKind::siding;

      // arrival arcs: end period is the arrival time
      for (int32_t r : in_routes[t.origin][p]) {
        const auto& route = st.routes[r];
        int run_p = ceil_div(route.running_time_s, gm);
        for (int tau = std::max(tau_lo, run_p); tau <= tau_hi; ++tau) {
          int start = tau - run_p;
          if (outage_blocked(p, start * gm, tau * gm)) continue;
          STArc a{ArcKind::arrival, r, t.origin, p, start, tau, route.running_time_s};
          int32_t id = table.intern(a);
          block.arrival_slots.push_back(static_cast<int32_t>(slots.size()));
          slots.push_back(id);
          slot_costs.push_back(w1 * route.running_time_s +
                               w2 * std::abs(tau * gm - t.desired_arrival_s));
        }
      }
      // departure arcs: start period is the departure time
      for (int32_t r : out_routes[p][t.destination]) {
        const auto& route = st.routes[r];
        int run_p = ceil_div(route.running_time_s, gm);
        for (int sig = sig_lo; sig <= std::min(sig_hi, TM - run_p); ++sig) {
          if (outage_blocked(p, sig * gm, sig * gm + st.siding_clearing_s)) continue;
          STArc a{ArcKind::departure, r, p, t.destination, sig, sig + run_p,
                  route.running_time_s};
          int32_t id = table.intern(a);
          pt.deps.emplace_back(sig, id);
          slots.push_back(id);
          slot_costs.push_back(w1 * route.running_time_s +
                               w2 * std::abs(sig * gm - t.desired_departure_s));
        }
      }
      // wait arcs on sidings, one per period between first arrival and last
      // departure
      if (siding) {
        for (int tt = std::max(tau_lo, 0); tt < sig_hi && tt + 1 <= TM; ++tt) {
          if (tt < 0) continue;
          if (outage_blocked(p, tt * gm, (tt + 1) * gm)) continue;
          STArc a{ArcKind::siding_wait, p, p, p, tt, tt + 1, gm};
          int32_t id = table.intern(a);
          pt.waits.emplace_back(tt, id);
          slots.push_back(id);
          slot_costs.push_back(w1 * gm);
        }
      }
      ptmp.push_back(std::move(pt));
    }

    // fix up arrival slot list: it currently indexes into `slots` already;
    // convert platform temp lists to block platforms with slot references.
    // (Arrival slots were recorded as they were appended above.)
    std::unordered_map<int32_t, int32_t> slot_of_global;
    for (size_t i = 0; i < slots.size(); ++i)
      slot_of_global.emplace(slots[i], static_cast<int32_t>(i));

    for (auto& pt : ptmp) {
      TrainBlock::Platform bp;
      bp.node = pt.node;
      bp.is_siding = st.nodes[pt.node].kind == NodeKind::siding;
      if (!pt.waits.empty()) {
        int lo = pt.waits.front().first, hi = pt.waits.back().first;
        bp.wait_base = lo;
        bp.wait_slots.assign(hi - lo + 1, -1);
        for (auto& [period, id] : pt.waits)
          bp.wait_slots[period - lo] = slot_of_global[id];
      }
      if (!pt.deps.empty()) {
        int lo = pt.deps.front().first, hi = pt.deps.back().first;
        for (auto& [period, id] : pt.deps) lo = std::min(lo, period), hi = std::max(hi, period);
        bp.dep_base = lo;
        bp.dep_slots.assign(hi - lo + 1, {});
        for (auto& [period, id] : pt.deps)
          bp.dep_slots[period - lo].push_back(slot_of_global[id]);
      }
      block.platforms.push_back(std::move(bp));
    }

    if (in.outages.empty()) {
      bool any_arr = !block.arrival_slots.empty();
      bool any_dep = false;
      for (const auto& bp : block.platforms) any_dep |= !bp.dep_slots.empty();
      if (!any_arr || !any_dep)
        throw std::runtime_error("train " + t.id +
                                 ": no feasible arc fits the shift windows inside the horizon");
    }

    // the virtual path is always available, as the last slot
    block.virtual_slot = static_cast<int32_t>(slots.size());
    slots.push_back(net.virtual_arc());
    slot_costs.push_back(net.cancel_cost_[f]);

    net.train_off_[f + 1] = net.train_off_[f] + static_cast<int32_t>(slots.size());
    net.train_arcs_.insert(net.train_arcs_.end(), slots.begin(), slots.end());
    net.raw_costs_.insert(net.raw_costs_.end(), slot_costs.begin(), slot_costs.end());
  }

  net.arcs_ = std::move(table.arcs);

  // ---- linking sets ---------------------------------------------------------
  const int32_t A = static_cast<int32_t>(net.arcs_.size());
  const int micro = grid.micro_s;
  const int TMicro = res.micro_periods;
  const InterlockingMode mode = st.interlocking;

  std::vector<std::vector<int32_t>> sg_tmp(A), sd_tmp(A);
#ifdef _OPENMP
  int nthreads = threads <= 0 ? omp_get_max_threads() : threads;
#else
  int nthreads = 1;
  (void)threads;
#endif
  (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
  for (int32_t a = 1; a < A; ++a) {
    const STArc& arc = net.arcs_[a];
    const int s0 = arc.start_period * gm;
    auto& sg_out = sg_tmp[a];
    auto& sd_out = sd_tmp[a];
    switch (arc.kind) {
      case ArcKind::arrival: {
        const auto& route = st.routes[arc.physical];
        for (const auto& occ : route.sg_occupations) {
          int eff = effective_sg_offset(route, occ, mode);
          push_micro_range(s0, s0 + eff + st.sg_clearing_s, micro, TMicro,
                           res.sg_resource(occ.sg, 0), sg_out);
        }
        int32_t ord = res.siding_ordinal[arc.to_node];
        if (ord >= 0)
          push_micro_range(s0, arc.end_period * gm, micro, TMicro,
                           res.siding_resource(ord, 0), sd_out);
        break;
      }
      case ArcKind::departure: {
        const auto& route = st.routes[arc.physical];
        for (const auto& occ : route.sg_occupations) {
          int eff = effective_sg_offset(route, occ, mode);
          push_micro_range(s0, s0 + eff + st.sg_clearing_s, micro, TMicro,
                           res.sg_resource(occ.sg, 0), sg_out);
        }
        int32_t ord = res.siding_ordinal[arc.from_node];
        if (ord >= 0)
          push_micro_range(s0, s0 + st.siding_clearing_s, micro, TMicro,
                           res.siding_resource(ord, 0), sd_out);
        break;
      }
      case ArcKind::siding_wait: {
        int32_t ord = res.siding_ordinal[arc.physical];
        push_micro_range(s0, arc.end_period * gm, micro, TMicro,
                         res.siding_resource(ord, 0), sd_out);
        break;
      }
      default:
        break;
    }
    std::sort(sg_out.begin(), sg_out.end());
    sg_out.erase(std::unique(sg_out.begin(), sg_out.end()), sg_out.end());
  }

  net.sg_off_.assign(A + 1, 0);
  net.sd_off_.assign(A + 1, 0);
  for (int32_t a = 0; a < A; ++a) {
    net.sg_off_[a + 1] = net.sg_off_[a] + static_cast<int64_t>(sg_tmp[a].size());
    net.sd_off_[a + 1] = net.sd_off_[a] + static_cast<int64_t>(sd_tmp[a].size());
  }
  net.sg_links_.resize(net.sg_off_[A]);
  net.sd_links_.resize(net.sd_off_[A]);
  for (int32_t a = 0; a < A; ++a) {
    std::copy(sg_tmp[a].begin(), sg_tmp[a].end(), net.sg_links_.begin() + net.sg_off_[a]);
    std::copy(sd_tmp[a].begin(), sd_tmp[a].end(), net.sd_links_.begin() + net.sd_off_[a]);
  }

  // ---- inverse incidence: resource -> arcs ----------------------------------
  const int32_t R = res.total();
  std::vector<int32_t> counts(R, 0);
  for (int32_t a = 0; a < A; ++a) {
    for (int32_t r : sg_tmp[a]) counts[r]++;
    for (int32_t r : sd_tmp[a]) counts[r]++;
  }
  net.inc_off_.assign(R + 1, 0);
  for (int32_t r = 0; r < R; ++r) net.inc_off_[r + 1] = net.inc_off_[r] + counts[r];
  net.inc_arcs_.resize(net.inc_off_[R]);
  std::vector<int64_t> cursor(net.inc_off_.begin(), net.inc_off_.end() - 1);
  for (int32_t a = 0; a < A; ++a) {
    for (int32_t r : sg_tmp[a]) net.inc_arcs_[cursor[r]++] = a;
    for (int32_t r : sd_tmp[a]) net.inc_arcs_[cursor[r]++] = a;
  }

  return net;
}

Occupation occupied_resources(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  Occupation occ;
  if (plan.cancelled) return occ;
  for (int32_t a : plan.arcs) {
    const STArc& arc = net.arc(a);
    auto sg = net.sg_links(a);
    auto sd = net.siding_links(a);
    switch (arc.kind) {
      case ArcKind::arrival:
        occ.sg.insert(occ.sg.end(), sg.begin(), sg.end());
        occ.siding_lock.insert(occ.siding_lock.end(), sd.begin(), sd.end());
        break;
      case ArcKind::departure:
        occ.sg.insert(occ.sg.end(), sg.begin(), sg.end());
        occ.siding_clear.insert(occ.siding_clear.end(), sd.begin(), sd.end());
        break;
      case ArcKind::siding_wait:
        occ.siding_dwell.insert(occ.siding_dwell.end(), sd.begin(), sd.end());
        break;
      default:
        break;
    }
  }
  return occ;
}

}  // namespace tps
