#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "support/test_oracles.hpp"
#include "tps/generator.hpp"
#include "tps/network.hpp"
#include "tps/rng.hpp"
#include "tps/train_dp.hpp"

using namespace tps;

namespace {

Instance mixed_instance() {
  Instance inst = test::two_siding_instance();
  inst.trains.push_back(test::make_train(inst.station, "T1", "E", "L", 300, 420, true));
  inst.trains.push_back(test::make_train(inst.station, "T2", "E", "L", 450, 450, false));
  inst.trains.push_back(test::make_train(inst.station, "T3", "E", "L", 600, 780, true));
  return inst;
}

std::vector<double> random_costs(const SpaceTimeNetwork& net, int32_t f,
                                 std::mt19937_64& gen) {
  std::vector<double> costs(net.raw_costs(f).begin(), net.raw_costs(f).end());
  std::uniform_real_distribution<double> jitter(0.0, 50.0);
  for (size_t i = 0; i + 1 < costs.size(); ++i) costs[i] += jitter(gen);
  return costs;
}

}  // namespace

TEST_CASE("block solver matches exhaustive enumeration under raw costs") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  for (int32_t f = 0; f < net.num_trains(); ++f) {
    BlockResult got = solve_block(net, f, net.raw_costs(f), 17);
    std::string err = test::check_block_result(net, f, net.raw_costs(f), nullptr, got);
    INFO("train ", f, ": ", err);
    CHECK(err.empty());
  }
}

TEST_CASE("block solver matches enumeration under random cost vectors") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 60; ++rep) {
    for (int32_t f = 0; f < net.num_trains(); ++f) {
      std::vector<double> costs = random_costs(net, f, gen);
      BlockResult got = solve_block(net, f, costs, derive_seed(5, rep, f));
      std::string err = test::check_block_result(net, f, costs, nullptr, got);
      INFO("rep ", rep, " train ", f, ": ", err);
      REQUIRE(err.empty());
    }
  }
}

TEST_CASE("block solver matches enumeration on generated stations") {
  for (uint64_t seed : {11ull, 12ull}) {
    VirtualStationParams p;
    p.trains = 6;
    p.seed = seed;
    p.interlocking =
        seed % 2 ? InterlockingMode::route_release : InterlockingMode::sectional_release;
    SpaceTimeNetwork net = build_network(generate_virtual_station(p));
    std::mt19937_64 gen(seed);
    for (int rep = 0; rep < 10; ++rep) {
      for (int32_t f = 0; f < net.num_trains(); ++f) {
        std::vector<double> costs = random_costs(net, f, gen);
        BlockResult got = solve_block(net, f, costs, derive_seed(seed, rep, f));
        std::string err = test::check_block_result(net, f, costs, nullptr, got);
        INFO("seed ", seed, " rep ", rep, " train ", f, ": ", err);
        REQUIRE(err.empty());
      }
    }
  }
}

TEST_CASE("tight maximum dwell still finds the optimum") {
  // A cheap early arrival must not shadow a later one that alone can reach
  // the only departure within the dwell ceiling.
  Instance inst = test::two_siding_instance();
  Train t = test::make_train(inst.station, "T1", "E", "L", 300, 420, true);
  t.dwell_min_s = 60;
  t.dwell_max_s = 120;  // at most 8 periods after arrival
  inst.trains.push_back(t);
  SpaceTimeNetwork net = build_network(inst);

  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> costs = random_costs(net, 0, gen);
    BlockResult got = solve_block(net, 0, costs, derive_seed(13, rep));
    std::string err = test::check_block_result(net, 0, costs, nullptr, got);
    INFO("rep ", rep, ": ", err);
    REQUIRE(err.empty());
  }
}

TEST_CASE("claimed resources filter arcs out") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  const int32_t R = net.resources().total();
  std::mt19937_64 gen(21);
  std::bernoulli_distribution claim(0.08);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<uint8_t> claimed(R, 0);
    for (int32_t r = 0; r < R; ++r) claimed[r] = claim(gen) ? 1 : 0;
    DpFilter filter;
    filter.claimed = claimed.data();
    for (int32_t f = 0; f < net.num_trains(); ++f) {
      BlockResult got = solve_block(net, f, net.raw_costs(f), derive_seed(3, rep, f),
                                    &filter);
      std::string err =
          test::check_block_result(net, f, net.raw_costs(f), &filter, got);
      INFO("rep ", rep, " train ", f, ": ", err);
      REQUIRE(err.empty());
    }
  }
}

TEST_CASE("fully claimed resources leave only the virtual path") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  std::vector<uint8_t> claimed(net.resources().total(), 1);
  DpFilter filter;
  filter.claimed = claimed.data();
  for (int32_t f = 0; f < net.num_trains(); ++f) {
    BlockResult got = solve_block(net, f, net.raw_costs(f), 1, &filter);
    CHECK(got.cancelled);
    CHECK(got.cost == net.cancellation_cost(f));
    CHECK(got.arcs.empty());
  }
}

TEST_CASE("siding arrival caps act on arrival arcs only") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  const auto& res = net.resources();
  std::vector<int32_t> arrivals(res.sidings.size(), 0);
  arrivals[0] = 2;  // P1 full
  DpFilter filter;
  filter.siding_arrivals = arrivals.data();
  filter.siding_cap = 2;
  // T1 stops; its plan must avoid P1 entirely
  BlockResult got = solve_block(net, 0, net.raw_costs(0), 1, &filter);
  std::string err = test::check_block_result(net, 0, net.raw_costs(0), &filter, got);
  CHECK(err.empty());
  REQUIRE_FALSE(got.cancelled);
  CHECK(net.arc(got.arcs.front()).to_node ==
        net.instance().station.node_index("P2"));

  // with both sidings capped the stopping train cancels
  arrivals[1] = 2;
  BlockResult none = solve_block(net, 0, net.raw_costs(0), 1, &filter);
  CHECK(none.cancelled);

  // the nonstop train is unaffected by siding caps
  BlockResult ns = solve_block(net, 1, net.raw_costs(1), 1, &filter);
  CHECK_FALSE(ns.cancelled);
}

TEST_CASE("cost ties are broken uniformly by the seed") {
  // Two sidings, symmetric routes and costs: force exact ties by zeroing all
  // slot costs except the virtual one.
  Instance inst = test::two_siding_instance();
  inst.station.routes[inst.station.route_index("in_E_P2")].running_time_s = 60;
  inst.station.routes[inst.station.route_index("in_E_P2")].sg_occupations = {{0, 30}};
  inst.station.routes[inst.station.route_index("out_P2_L")].running_time_s = 60;
  inst.station.routes[inst.station.route_index("out_P2_L")].sg_occupations = {{1, 30}};
  inst.trains.push_back(test::make_train(inst.station, "T1", "E", "L", 300, 420, true));
  SpaceTimeNetwork net = build_network(inst);

  std::vector<double> costs(net.train_arc_count(0), 0.0);
  costs[net.block(0).virtual_slot] = 1e6;
  std::map<int32_t, int> platform_hits;
  int draws = 400;
  for (int s = 0; s < draws; ++s) {
    BlockResult got = solve_block(net, 0, costs, derive_seed(1000, s));
    REQUIRE_FALSE(got.cancelled);
    platform_hits[net.arc(got.arcs.front()).to_node]++;
  }
  REQUIRE(platform_hits.size() == 2);  // both sidings get picked
  for (const auto& [node, hits] : platform_hits) {
    INFO("node ", node, " hits ", hits);
    CHECK(hits > draws / 10);  // loose uniformity bound
  }
  // same seed, same choice
  BlockResult a = solve_block(net, 0, costs, 777);
  BlockResult b = solve_block(net, 0, costs, 777);
  CHECK(a.arcs == b.arcs);
}

TEST_CASE("virtual path wins only by strict improvement") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  auto er = test::enumerate_paths(net, 0, net.raw_costs(0));
  REQUIRE_FALSE(er.paths.empty());

  std::vector<double> costs(net.raw_costs(0).begin(), net.raw_costs(0).end());
  // price the virtual slot exactly at the physical optimum: keep the train
  costs[net.block(0).virtual_slot] = er.best_physical;
  BlockResult tie = solve_block(net, 0, costs, 5);
  CHECK_FALSE(tie.cancelled);
  CHECK(tie.cost == doctest::Approx(er.best_physical));

  // strictly cheaper: cancel
  costs[net.block(0).virtual_slot] = er.best_physical - 1.0;
  BlockResult cheaper = solve_block(net, 0, costs, 5);
  CHECK(cheaper.cancelled);
}

TEST_CASE("serial and parallel block sweeps agree") {
  SpaceTimeNetwork net = build_network(mixed_instance());
  std::vector<double> all(net.all_raw_costs().begin(), net.all_raw_costs().end());
  std::vector<BlockResult> s, p;
  solve_blocks_serial(net, all, 404, s);
  solve_blocks_parallel(net, all, 404, p, 3);
  REQUIRE(s.size() == p.size());
  for (size_t f = 0; f < s.size(); ++f) {
    CHECK(s[f].cancelled == p[f].cancelled);
    CHECK(s[f].cost == p[f].cost);
    CHECK(s[f].arcs == p[f].arcs);
  }
}
