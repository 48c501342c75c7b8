#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "support/test_oracles.hpp"
#include "tps/generator.hpp"
#include "tps/heuristic.hpp"
#include "tps/oracle.hpp"
#include "tps/solution.hpp"

using namespace tps;

namespace {

// Cheapest enumerated path of train f that arrives at `platform` exactly at
// arr_s and departs exactly at dep_s.
TrainPlan pick_path(const SpaceTimeNetwork& net, int32_t f, const std::string& platform,
                    int arr_s, int dep_s) {
  const int gm = net.grid().macro_s;
  int32_t node = net.instance().station.node_index(platform);
  auto er = test::enumerate_paths(net, f, net.raw_costs(f));
  for (const auto& p : er.paths) {
    const STArc& arr = net.arc(p.arcs.front());
    const STArc& dep = net.arc(p.arcs.back());
    if (arr.to_node == node && arr.end_period * gm == arr_s &&
        dep.start_period * gm == dep_s)
      return {f, false, p.arcs};
  }
  REQUIRE_MESSAGE(false, "no path to ", platform, " at ", arr_s, "/", dep_s);
  return {f, true, {}};
}

Instance trio_instance() {
  Instance inst = test::two_siding_instance();
  inst.trains.push_back(test::make_train(inst.station, "T1", "E", "L", 300, 420, true));
  inst.trains.push_back(test::make_train(inst.station, "T2", "E", "L", 315, 435, true));
  inst.trains.push_back(test::make_train(inst.station, "T3", "E", "L", 600, 780, true));
  return inst;
}

}  // namespace

TEST_CASE("conflict counts: distinct trains sharing over-occupied resources") {
  SpaceTimeNetwork net = build_network(trio_instance());
  SUBCASE("two trains dwell on the same siding, the third is clear") {
    std::vector<TrainPlan> plans = {pick_path(net, 0, "P1", 300, 420),
                                    pick_path(net, 1, "P1", 315, 435),
                                    pick_path(net, 2, "P2", 600, 780)};
    CHECK(conflict_counts(net, plans) == std::vector<int32_t>{1, 1, 0});
  }
  SUBCASE("disjoint plans have no conflicts") {
    // T2 shifted to 420/540 so its inbound hold of GA ends before T3 starts
    // and begins after T1 is through
    std::vector<TrainPlan> plans = {pick_path(net, 0, "P1", 300, 420),
                                    pick_path(net, 1, "P2", 420, 540),
                                    pick_path(net, 2, "P1", 600, 780)};
    CHECK(conflict_counts(net, plans) == std::vector<int32_t>{0, 0, 0});
  }
  SUBCASE("cancelled plans occupy nothing") {
    std::vector<TrainPlan> plans = {pick_path(net, 0, "P1", 300, 420),
                                    {1, true, {}},
                                    {2, true, {}}};
    CHECK(conflict_counts(net, plans) == std::vector<int32_t>{0, 0, 0});
  }
}

TEST_CASE("three trains piled on one siding all see two neighbors") {
  Instance inst = test::two_siding_instance();
  inst.trains.push_back(test::make_train(inst.station, "A", "E", "L", 300, 420, true));
  inst.trains.push_back(test::make_train(inst.station, "B", "E", "L", 315, 435, true));
  inst.trains.push_back(test::make_train(inst.station, "C", "E", "L", 330, 450, true));
  SpaceTimeNetwork net = build_network(inst);
  std::vector<TrainPlan> plans = {pick_path(net, 0, "P1", 300, 420),
                                  pick_path(net, 1, "P1", 315, 435),
                                  pick_path(net, 2, "P1", 330, 450)};
  CHECK(conflict_counts(net, plans) == std::vector<int32_t>{2, 2, 2});
}

TEST_CASE("priority order sorts by conflicts with seeded tie shuffling") {
  std::vector<int32_t> conflicts = {2, 0, 1, 0};
  std::set<std::vector<int32_t>> seen;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto order = priority_order(conflicts, seed);
    REQUIRE(order.size() == 4);
    // ascending conflict counts
    for (size_t i = 1; i < order.size(); ++i)
      CHECK(conflicts[order[i - 1]] <= conflicts[order[i]]);
    // it is a permutation
    std::vector<int32_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int32_t>{0, 1, 2, 3});
    CHECK(order == priority_order(conflicts, seed));  // reproducible
    seen.insert(order);
  }
  CHECK(seen.size() > 1);  // the zero-conflict tie flips for some seed
}

TEST_CASE("sequential scheduling claims resources and stays feasible") {
  Instance inst = trio_instance();
  inst.trains.push_back(test::make_train(inst.station, "T4", "E", "L", 320, 440, true));
  SpaceTimeNetwork net = build_network(inst);
  std::vector<int32_t> order = {0, 1, 2, 3};
  Solution sol = schedule_sequentially(net, order, 11);
  REQUIRE(sol.plans.size() == 4);
  CHECK(check_feasibility(net, sol).feasible());
  objective_value(net, sol);  // structural validation must pass

  // pairwise disjoint occupations across scheduled trains
  std::set<std::pair<int32_t, int>> taken;  // (resource, type)
  for (const TrainPlan& p : sol.plans) {
    if (p.cancelled) continue;
    Occupation occ = occupied_resources(net, p);
    occ.dedup_within_types();
    int type = 0;
    for (const auto* list :
         {&occ.sg, &occ.siding_dwell, &occ.siding_lock, &occ.siding_clear}) {
      ++type;
      for (int32_t r : *list) {
        // same resource may not be taken twice, by any type
        for (int ot = 1; ot <= 4; ++ot) CHECK(taken.count({r, ot}) == 0);
        taken.insert({r, type});
      }
    }
  }
}

TEST_CASE("scheduling order shapes who wins the contested siding") {
  SpaceTimeNetwork net = build_network(trio_instance());
  std::vector<int32_t> fwd = {0, 1, 2}, rev = {1, 0, 2};
  Solution a = schedule_sequentially(net, fwd, 5);
  Solution b = schedule_sequentially(net, rev, 5);
  CHECK(check_feasibility(net, a).feasible());
  CHECK(check_feasibility(net, b).feasible());
  // whoever is scheduled first gets their solo optimum
  double solo0 = test::enumerate_paths(net, 0, net.raw_costs(0)).best_physical;
  double solo1 = test::enumerate_paths(net, 1, net.raw_costs(1)).best_physical;
  CHECK(plan_cost(net, a.plans[0]) == doctest::Approx(solo0));
  CHECK(plan_cost(net, b.plans[1]) == doctest::Approx(solo1));
  // same order and seed reproduce the same plans
  Solution c = schedule_sequentially(net, fwd, 5);
  for (size_t f = 0; f < a.plans.size(); ++f) CHECK(a.plans[f].arcs == c.plans[f].arcs);
}

TEST_CASE("arrival caps limit each siding during sequential scheduling") {
  Instance inst = trio_instance();  // three stopping trains, two sidings
  SpaceTimeNetwork net = build_network(inst);
  std::vector<int32_t> order = {0, 1, 2};
  Solution sol = schedule_sequentially(net, order, 3, /*balance_cap=*/1);
  std::vector<int> arrivals(net.resources().sidings.size(), 0);
  int scheduled = 0;
  for (const TrainPlan& p : sol.plans) {
    if (p.cancelled) continue;
    ++scheduled;
    arrivals[net.resources().siding_ordinal[platform_node(net, p)]]++;
  }
  for (int a : arrivals) CHECK(a <= 1);
  CHECK(scheduled == 2);  // two sidings, cap one arrival each
}

TEST_CASE("heuristic objective upper-bounds the exact optimum") {
  for (uint64_t seed : {21ull, 22ull, 23ull}) {
    VirtualStationParams p;
    p.trains = 6;
    p.seed = seed;
    SpaceTimeNetwork net = build_network(generate_virtual_station(p));
    std::vector<TrainPlan> empty(net.num_trains());
    for (int32_t f = 0; f < net.num_trains(); ++f) empty[f] = {f, true, {}};
    auto order = priority_order(conflict_counts(net, empty), seed);
    Solution sol = schedule_sequentially(net, order, seed);
    REQUIRE(check_feasibility(net, sol).feasible());
    double ub = objective_value(net, sol).total;
    double opt = solve_exact(net).optimum;
    CHECK(ub >= opt - 1e-9);
  }
}
