#include "tps/oracle.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "tps/heuristic.hpp"

namespace tps {

FeasibilityReport check_feasibility(const SpaceTimeNetwork& net, const Solution& sol) {
  const ResourceSpace& res = net.resources();
  const int32_t R = res.total();
  FeasibilityReport report;

  std::vector<int32_t> counts(R, 0);
  std::vector<Occupation> occs(sol.plans.size());
  for (size_t f = 0; f < sol.plans.size(); ++f) {
    occs[f] = occupied_resources(net, sol.plans[f]);
    occs[f].dedup_within_types();
    for (const auto* list :
         {&occs[f].sg, &occs[f].siding_dwell, &occs[f].siding_lock, &occs[f].siding_clear})
      for (int32_t r : *list) counts[r]++;
  }
  // gather occupants of over-occupied resources
  std::vector<std::pair<int32_t, int32_t>> pairs;  // (resource, train)
  for (size_t f = 0; f < sol.plans.size(); ++f)
    for (const auto* list :
         {&occs[f].sg, &occs[f].siding_dwell, &occs[f].siding_lock, &occs[f].siding_clear})
      for (int32_t r : *list)
        if (counts[r] > 1) pairs.emplace_back(r, sol.plans[f].train);
  std::sort(pairs.begin(), pairs.end());
  for (size_t i = 0; i < pairs.size();) {
    size_t j = i;
    ResourceViolation v;
    v.resource = pairs[i].first;
    v.occupation = counts[pairs[i].first];
    while (j < pairs.size() && pairs[j].first == pairs[i].first) {
      if (v.trains.empty() || v.trains.back() != pairs[j].second)
        v.trains.push_back(pairs[j].second);
      ++j;
    }
    report.capacity.push_back(std::move(v));
    i = j;
  }

  const Instance& in = net.instance();
  if (in.balance.enabled && in.balance.tolerance >= 0) {
    int cap = in.derived_cap_base() + in.balance.tolerance;
    std::vector<std::vector<int32_t>> arrivals(res.sidings.size());
    for (const TrainPlan& p : sol.plans) {
      if (p.cancelled || p.arcs.empty()) continue;
      int32_t ord = res.siding_ordinal[net.arc(p.arcs.front()).to_node];
      if (ord >= 0) arrivals[ord].push_back(p.train);
    }
    for (size_t i = 0; i < arrivals.size(); ++i)
      if (static_cast<int>(arrivals[i].size()) > cap)
        report.balance.push_back({res.sidings[i], static_cast<int32_t>(arrivals[i].size()),
                                  cap, arrivals[i]});
  }
  return report;
}

namespace {

struct Candidate {
  double cost = 0;
  int32_t siding_ordinal = -1;
  std::vector<int32_t> resources;  // sorted unique claim set
  std::vector<int32_t> arcs;       // empty: virtual path
};

std::vector<Candidate> enumerate_candidates(const SpaceTimeNetwork& net, int32_t f) {
  const TrainBlock& block = net.block(f);
  const auto arcs = net.train_arcs(f);
  const auto raw = net.raw_costs(f);
  const ResourceSpace& res = net.resources();
  std::vector<Candidate> out;

  for (const auto& pf : block.platforms) {
    if (pf.dep_slots.empty()) continue;
    const int32_t dmin = pf.is_siding ? block.dwell_min_p : 0;
    const int32_t dmax = pf.is_siding ? block.dwell_max_p : 0;
    const int32_t dep_lo = pf.dep_base;
    const int32_t dep_hi = pf.dep_base + static_cast<int32_t>(pf.dep_slots.size()) - 1;

    for (int32_t aslot : block.arrival_slots) {
      const STArc& arr = net.arc(arcs[aslot]);
      if (arr.to_node != pf.node) continue;
      const int32_t tau = arr.end_period;
      for (int32_t k = std::max(dmin, dep_lo - tau); k <= std::min(dmax, dep_hi - tau);
           ++k) {
        // the k wait arcs must all exist
        bool ok = true;
        double wait_cost = 0;
        for (int32_t t = tau; t < tau + k && ok; ++t) {
          int32_t wi = t - pf.wait_base;
          int32_t ws = (wi >= 0 && wi < static_cast<int32_t>(pf.wait_slots.size()))
                           ? pf.wait_slots[wi]
                           : -1;
          if (ws < 0)
            ok = false;
          else
            wait_cost += raw[ws];
        }
        if (!ok) continue;
        for (int32_t dslot : pf.dep_slots[tau + k - dep_lo]) {
          Candidate c;
          c.cost = raw[aslot] + wait_cost + raw[dslot];
          c.siding_ordinal = pf.is_siding ? res.siding_ordinal[pf.node] : -1;
          c.arcs.push_back(arcs[aslot]);
          for (int32_t t = tau; t < tau + k; ++t)
            c.arcs.push_back(arcs[pf.wait_slots[t - pf.wait_base]]);
          c.arcs.push_back(arcs[dslot]);
          TrainPlan plan{f, false, c.arcs};
          Occupation occ = occupied_resources(net, plan);
          occ.dedup_within_types();
          c.resources.reserve(occ.total());
          for (const auto* list :
               {&occ.sg, &occ.siding_dwell, &occ.siding_lock, &occ.siding_clear})
            c.resources.insert(c.resources.end(), list->begin(), list->end());
          std::sort(c.resources.begin(), c.resources.end());
          c.resources.erase(std::unique(c.resources.begin(), c.resources.end()),
                            c.resources.end());
          out.push_back(std::move(c));
        }
      }
    }
  }
  Candidate virt;
  virt.cost = net.cancellation_cost(f);
  out.push_back(std::move(virt));
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
  return out;
}

struct Searcher {
  const SpaceTimeNetwork& net;
  const std::vector<int32_t>& order;                 // train index per level
  const std::vector<std::vector<Candidate>>& cands;  // per level
  std::vector<double> suffix_min;
  long long node_cap;
  bool balance_on;
  int balance_cap;

  long long nodes = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<const Candidate*> chosen = {}, incumbent = {};
  std::vector<int32_t> chosen_idx = {};
  std::vector<uint8_t> claimed = {};
  std::vector<int32_t> siding_count = {};
  // twin[l]: level l's candidate list is identical to level l-1's, so the
  // trains are interchangeable and l may only pick an index >= the one chosen
  // at l-1 (symmetry breaking; equal indices only happen on the virtual path)
  std::vector<uint8_t> twin = {};
  // first_usable[depth][l]: resume scan points for the completion bound;
  // claims only grow along a path, so the points only move right
  std::vector<std::vector<int32_t>> first_usable = {};

  bool usable(const Candidate& c) const {
    if (balance_on && c.siding_ordinal >= 0 && siding_count[c.siding_ordinal] >= balance_cap)
      return false;
    for (int32_t r : c.resources)
      if (claimed[r]) return false;
    return true;
  }

  // Lower bound on completing levels [level, end) under the current claims:
  // each remaining train pays at least its cheapest still-usable candidate
  // (the virtual path claims nothing, so a term always exists).  Dominates
  // the static suffix bound and kills conflicted branches near the root.
  double claimed_bound(size_t level) {
    std::vector<int32_t>& idx = first_usable[level];
    if (level > 0) {
      const std::vector<int32_t>& up = first_usable[level - 1];
      std::copy(up.begin() + level, up.end(), idx.begin() + level);
    }
    double b = 0;
    for (size_t l = level; l < order.size(); ++l) {
      int32_t& i = idx[l];
      while (!usable(cands[l][i])) ++i;
      b += cands[l][i].cost;
    }
    return b;
  }

  void dfs(size_t level, double cost) {
    if (++nodes > node_cap)
      throw EnumerationCapExceeded("candidate-path search exceeded " +
                                   std::to_string(node_cap) + " nodes");
    if (level == order.size()) {
      if (cost < best) {
        best = cost;
        incumbent = chosen;
      }
      return;
    }
    if (cost + suffix_min[level] >= best) return;
    if (cost + claimed_bound(level) >= best) return;
    const size_t start =
        twin[level] ? static_cast<size_t>(chosen_idx[level - 1]) : size_t{0};
    for (size_t ci = start; ci < cands[level].size(); ++ci) {
      const Candidate& c = cands[level][ci];
      double rest = level + 1 < order.size() ? suffix_min[level + 1] : 0.0;
      if (cost + c.cost + rest >= best) break;  // candidates sorted by cost
      if (!usable(c)) continue;
      for (int32_t r : c.resources) claimed[r] = 1;
      if (c.siding_ordinal >= 0) siding_count[c.siding_ordinal]++;
      chosen[level] = &c;
      chosen_idx[level] = static_cast<int32_t>(ci);
      dfs(level + 1, cost + c.cost);
      for (int32_t r : c.resources) claimed[r] = 0;
      if (c.siding_ordinal >= 0) siding_count[c.siding_ordinal]--;
    }
  }
};

}  // namespace

ExactResult solve_exact(const SpaceTimeNetwork& net, const ExactParams& params) {
  const int32_t F = net.num_trains();
  const Instance& in = net.instance();

  std::vector<std::vector<Candidate>> cands(F);
  long long total_cands = 0;
  for (int32_t f = 0; f < F; ++f) {
    cands[f] = enumerate_candidates(net, f);
    total_cands += static_cast<long long>(cands[f].size());
  }

  // canonical level order: most constrained first, identical candidate lists
  // adjacent (so their symmetry can be broken), then by train id -- invariant
  // to the order trains appear in the instance
  auto list_hash = [](const std::vector<Candidate>& v) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    for (const Candidate& c : v) {
      uint64_t bits;
      std::memcpy(&bits, &c.cost, sizeof bits);
      mix(bits);
      for (int32_t a : c.arcs) mix(static_cast<uint64_t>(a) + 0x9e3779b97f4a7c15ull);
    }
    return h;
  };
  std::vector<uint64_t> hashes(F);
  for (int32_t f = 0; f < F; ++f) hashes[f] = list_hash(cands[f]);
  std::vector<int32_t> order(F);
  for (int32_t f = 0; f < F; ++f) order[f] = f;
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (cands[a].size() != cands[b].size()) return cands[a].size() < cands[b].size();
    if (hashes[a] != hashes[b]) return hashes[a] < hashes[b];
    return in.trains[a].id < in.trains[b].id;
  });
  std::vector<std::vector<Candidate>> by_level(F);
  for (int32_t l = 0; l < F; ++l) by_level[l] = std::move(cands[order[l]]);

  std::vector<uint8_t> twin(F, 0);
  auto same_list = [](const std::vector<Candidate>& a, const std::vector<Candidate>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].cost != b[i].cost || a[i].arcs != b[i].arcs) return false;
    return true;
  };
  for (int32_t l = 1; l < F; ++l) twin[l] = same_list(by_level[l], by_level[l - 1]);

  const bool balance_on = in.balance.enabled && in.balance.tolerance >= 0;
  const int bal_cap = balance_on ? in.derived_cap_base() + in.balance.tolerance : -1;

  Searcher s{net, order, by_level, {}, params.node_cap, balance_on, bal_cap};
  s.suffix_min.assign(F + 1, 0.0);
  for (int32_t l = F - 1; l >= 0; --l)
    s.suffix_min[l] = s.suffix_min[l + 1] + by_level[l].front().cost;
  s.claimed.assign(net.resources().total(), 0);
  s.siding_count.assign(net.resources().sidings.size(), 0);
  s.chosen.assign(F, nullptr);
  s.chosen_idx.assign(F, 0);
  s.twin = std::move(twin);
  s.first_usable.assign(F, std::vector<int32_t>(F, 0));

  // warm start: a feasible plan from the sequential heuristic (scheduled in
  // the canonical level order) seeds the incumbent bound, so the search only
  // has to find strictly better leaves
  Solution warm = schedule_sequentially(net, order, 1717, bal_cap);
  double warm_cost = 0;
  for (const TrainPlan& p : warm.plans) warm_cost += plan_cost(net, p);
  s.best = warm_cost;

  s.dfs(0, 0.0);

  ExactResult out;
  out.optimum = s.best;
  out.nodes_explored = s.nodes;
  out.candidates = total_cands;
  out.solution.method = "exact";
  if (std::none_of(s.incumbent.begin(), s.incumbent.end(),
                   [](const Candidate* c) { return c == nullptr; }) &&
      !s.incumbent.empty()) {
    out.solution.plans.resize(F);
    for (int32_t l = 0; l < F; ++l) {
      const Candidate* c = s.incumbent[l];
      int32_t f = order[l];
      out.solution.plans[f] = {f, c->arcs.empty(), c->arcs};
    }
  } else {
    out.solution.plans = std::move(warm.plans);  // the warm start is optimal
  }
  out.solution.bounds = {s.best, s.best, 0.0, 0, 0.0, "exact"};
  return out;
}

}  // namespace tps
