#include "tps/train_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tps/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tps {

namespace {

struct Label {
  double cost;
  int32_t slot;    // train-arc slot that created the label
  int32_t parent;  // arena index of the predecessor label, -1 for arrivals
  int32_t dwell;   // wait periods accumulated on the platform
};

struct Terminal {
  double cost;
  int32_t label;     // arena index of the platform label
  int32_t dep_slot;  // train-arc slot of the departure arc
};

// Scratch buffers reused across calls (and private per OpenMP thread).
struct Scratch {
  std::vector<Label> arena;
  std::vector<int32_t> cur, next;
  std::vector<std::pair<int32_t, int32_t>> arrivals;  // (arrival period, slot)
  std::vector<Terminal> terminals;
};
thread_local Scratch scratch;

// A dominates B (same platform, same period) when it costs no more and can
// still reach every departure B can reach.
inline bool dominates(const Label& a, const Label& b, int32_t dmin) {
  if (a.cost > b.cost) return false;
  bool sat_a = a.dwell >= dmin, sat_b = b.dwell >= dmin;
  if (sat_a && sat_b) return a.dwell <= b.dwell;
  if (!sat_a && !sat_b) return a.dwell == b.dwell;
  return false;
}

inline void add_label(std::vector<Label>& arena, std::vector<int32_t>& cell,
                      const Label& cand, int32_t dmin) {
  size_t keep = 0;
  for (size_t i = 0; i < cell.size(); ++i) {
    const Label& e = arena[cell[i]];
    if (dominates(e, cand, dmin)) return;  // candidate is covered
    if (!dominates(cand, e, dmin)) cell[keep++] = cell[i];
  }
  cell.resize(keep);
  cell.push_back(static_cast<int32_t>(arena.size()));
  arena.push_back(cand);
}

inline bool arc_usable(const SpaceTimeNetwork& net, int32_t global, const DpFilter* filter) {
  if (!filter || !filter->claimed) return true;
  for (int32_t r : net.sg_links(global))
    if (filter->claimed[r]) return false;
  for (int32_t r : net.siding_links(global))
    if (filter->claimed[r]) return false;
  return true;
}

}  // namespace

BlockResult solve_block(const SpaceTimeNetwork& net, int32_t train,
                        std::span<const double> costs, uint64_t seed,
                        const DpFilter* filter) {
  const TrainBlock& block = net.block(train);
  const auto arcs = net.train_arcs(train);
  const double vcost = costs[block.virtual_slot];

  Scratch& s = scratch;
  s.arena.clear();
  s.terminals.clear();

  double cmin = std::numeric_limits<double>::infinity();
  auto tie_eps = [&] { return 1e-9 * std::max(1.0, std::abs(cmin)); };
  auto push_terminal = [&](double cost, int32_t label, int32_t dep_slot) {
    if (cost > cmin + tie_eps() && !s.terminals.empty()) return;
    cmin = std::min(cmin, cost);
    s.terminals.push_back({cost, label, dep_slot});
    if (s.terminals.size() > 64) {  // drop stale ties
      double eps = tie_eps();
      size_t keep = 0;
      for (const Terminal& t : s.terminals)
        if (t.cost <= cmin + eps) s.terminals[keep++] = t;
      s.terminals.resize(keep);
    }
  };

  for (const auto& pf : block.platforms) {
    if (pf.dep_slots.empty()) continue;
    const int32_t dmin = pf.is_siding ? block.dwell_min_p : 0;
    const int32_t dmax = pf.is_siding ? block.dwell_max_p : 0;

    // arrivals into this platform, grouped by arrival period
    s.arrivals.clear();
    for (int32_t slot : block.arrival_slots) {
      const STArc& arc = net.arc(arcs[slot]);
      if (arc.to_node != pf.node) continue;
      if (filter && filter->siding_cap >= 0 && pf.is_siding) {
        int32_t ord = net.resources().siding_ordinal[pf.node];
        if (filter->siding_arrivals[ord] >= filter->siding_cap) continue;
      }
      if (!arc_usable(net, arcs[slot], filter)) continue;
      s.arrivals.emplace_back(arc.end_period, slot);
    }
    if (s.arrivals.empty()) continue;
    std::sort(s.arrivals.begin(), s.arrivals.end());

    const int32_t t0 = s.arrivals.front().first;
    const int32_t t1 = pf.dep_base + static_cast<int32_t>(pf.dep_slots.size()) - 1;
    s.cur.clear();
    size_t ap = 0;

    for (int32_t t = t0; t <= t1; ++t) {
      while (ap < s.arrivals.size() && s.arrivals[ap].first == t) {
        int32_t slot = s.arrivals[ap++].second;
        add_label(s.arena, s.cur, {costs[slot], slot, -1, 0}, dmin);
      }
      if (s.cur.empty()) {
        if (ap >= s.arrivals.size()) break;
        continue;
      }
      // departures leaving at period t
      if (t >= pf.dep_base && t - pf.dep_base < static_cast<int32_t>(pf.dep_slots.size())) {
        for (int32_t dep : pf.dep_slots[t - pf.dep_base]) {
          bool usable = false, checked = false;
          for (int32_t li : s.cur) {
            const Label& L = s.arena[li];
            if (L.dwell < dmin || L.dwell > dmax) continue;
            double cost = L.cost + costs[dep];
            if (cost > cmin + tie_eps() && !s.terminals.empty()) continue;
            if (!checked) {
              usable = arc_usable(net, arcs[dep], filter);
              checked = true;
            }
            if (usable) push_terminal(cost, li, dep);
          }
        }
      }
      // extend by one wait period; nonstop labels die after their own period
      if (!pf.is_siding) {
        s.cur.clear();
        continue;
      }
      if (t == t1) continue;
      int32_t wi = t - pf.wait_base;
      int32_t wslot = (wi >= 0 && wi < static_cast<int32_t>(pf.wait_slots.size()))
                          ? pf.wait_slots[wi]
                          : -1;
      if (wslot < 0 || !arc_usable(net, arcs[wslot], filter)) {
        s.cur.clear();
        continue;
      }
      s.next.clear();
      for (int32_t li : s.cur) {
        Label L = s.arena[li];
        if (L.dwell + 1 > dmax) continue;
        add_label(s.arena, s.next, {L.cost + costs[wslot], wslot, li, L.dwell + 1}, dmin);
      }
      std::swap(s.cur, s.next);
    }
  }

  BlockResult out;
  if (s.terminals.empty() || vcost < cmin) {
    out.cancelled = true;
    out.cost = vcost;
    return out;
  }

  // uniform choice among cheapest terminals
  double eps = tie_eps();
  size_t keep = 0;
  for (const Terminal& t : s.terminals)
    if (t.cost <= cmin + eps) s.terminals[keep++] = t;
  s.terminals.resize(keep);
  std::mt19937_64 gen(seed);
  const Terminal& pick = s.terminals[draw(gen, s.terminals.size())];

  out.cost = pick.cost;
  std::vector<int32_t> chain;
  for (int32_t li = pick.label; li >= 0; li = s.arena[li].parent)
    chain.push_back(s.arena[li].slot);
  std::reverse(chain.begin(), chain.end());
  out.arcs.reserve(chain.size() + 1);
  for (int32_t slot : chain) out.arcs.push_back(arcs[slot]);
  out.arcs.push_back(arcs[pick.dep_slot]);
  return out;
}

void solve_blocks_serial(const SpaceTimeNetwork& net, std::span<const double> all_costs,
                         uint64_t seed, std::vector<BlockResult>& out) {
  const int32_t F = net.num_trains();
  out.resize(F);
  for (int32_t f = 0; f < F; ++f) {
    auto costs = all_costs.subspan(net.train_arc_begin(f), net.train_arc_count(f));
    out[f] = solve_block(net, f, costs, derive_seed(seed, f));
  }
}

void solve_blocks_parallel(const SpaceTimeNetwork& net, std::span<const double> all_costs,
                           uint64_t seed, std::vector<BlockResult>& out, int threads) {
  const int32_t F = net.num_trains();
  out.resize(F);
#ifdef _OPENMP
  int nthreads = threads <= 0 ? omp_get_max_threads() : threads;
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads)
#else
  (void)threads;
#endif
  for (int32_t f = 0; f < F; ++f) {
    auto costs = all_costs.subspan(net.train_arc_begin(f), net.train_arc_count(f));
    out[f] = solve_block(net, f, costs, derive_seed(seed, f));
  }
}

}  // namespace tps
