#include "tps/heuristic.hpp"

#include <algorithm>

#include "tps/rng.hpp"
#include "tps/train_dp.hpp"

namespace tps {

std::vector<int32_t> conflict_counts(const SpaceTimeNetwork& net,
                                     const std::vector<TrainPlan>& plans) {
  const int32_t R = net.resources().total();
  const int32_t F = static_cast<int32_t>(plans.size());
  std::vector<int32_t> counts(R, 0);
  std::vector<Occupation> occs(F);
  for (int32_t f = 0; f < F; ++f) {
    occs[f] = occupied_resources(net, plans[f]);
    occs[f].dedup_within_types();
    for (const auto* list :
         {&occs[f].sg, &occs[f].siding_dwell, &occs[f].siding_lock, &occs[f].siding_clear})
      for (int32_t r : *list) counts[r]++;
  }
  // occupant lists of over-occupied resources only
  std::vector<std::pair<int32_t, int32_t>> pairs;  // (resource, train)
  for (int32_t f = 0; f < F; ++f)
    for (const auto* list :
         {&occs[f].sg, &occs[f].siding_dwell, &occs[f].siding_lock, &occs[f].siding_clear})
      for (int32_t r : *list)
        if (counts[r] > 1) pairs.emplace_back(r, f);
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::vector<int32_t>> neighbors(F);
  for (size_t i = 0; i < pairs.size();) {
    size_t j = i;
    while (j < pairs.size() && pairs[j].first == pairs[i].first) ++j;
    for (size_t a = i; a < j; ++a)
      for (size_t b = i; b < j; ++b)
        if (pairs[a].second != pairs[b].second)
          neighbors[pairs[a].second].push_back(pairs[b].second);
    i = j;
  }
  std::vector<int32_t> out(F, 0);
  for (int32_t f = 0; f < F; ++f) {
    auto& n = neighbors[f];
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    out[f] = static_cast<int32_t>(n.size());
  }
  return out;
}

std::vector<int32_t> priority_order(std::span<const int32_t> conflicts, uint64_t seed) {
  const int32_t F = static_cast<int32_t>(conflicts.size());
  std::vector<int32_t> order(F);
  for (int32_t i = 0; i < F; ++i) order[i] = i;
  // shuffle first, then stable sort: ties end up uniformly permuted
  std::mt19937_64 gen(seed);
  for (int32_t i = F - 1; i > 0; --i) {
    int32_t j = static_cast<int32_t>(draw(gen, static_cast<uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int32_t a, int32_t b) { return conflicts[a] < conflicts[b]; });
  return order;
}

Solution schedule_sequentially(const SpaceTimeNetwork& net,
                               std::span<const int32_t> order, uint64_t seed,
                               int32_t balance_cap) {
  const int32_t F = net.num_trains();
  const auto& res = net.resources();
  std::vector<uint8_t> claimed(res.total(), 0);
  std::vector<int32_t> siding_arrivals(res.sidings.size(), 0);

  Solution sol;
  sol.method = "heuristic";
  sol.plans.resize(F);
  for (int32_t f = 0; f < F; ++f) sol.plans[f] = {f, true, {}};

  for (int32_t f : order) {
    DpFilter filter{claimed.data(), siding_arrivals.data(), balance_cap};
    BlockResult r = solve_block(net, f, net.raw_costs(f), derive_seed(seed, f, 0xF00D),
                                &filter);
    sol.plans[f] = {f, r.cancelled, std::move(r.arcs)};
    if (sol.plans[f].cancelled) continue;
    Occupation occ = occupied_resources(net, sol.plans[f]);
    for (const auto* list : {&occ.sg, &occ.siding_dwell, &occ.siding_lock, &occ.siding_clear})
      for (int32_t rr : *list) claimed[rr] = 1;
    int32_t ord = res.siding_ordinal[platform_node(net, sol.plans[f])];
    if (ord >= 0) siding_arrivals[ord]++;
  }
  return sol;
}

}  // namespace tps
