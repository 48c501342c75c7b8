#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "support/test_oracles.hpp"
#include "tps/gantt.hpp"
#include "tps/instance_io.hpp"
#include "tps/oracle.hpp"
#include "tps/solution.hpp"

using namespace tps;

namespace {

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

Instance io_instance() {
  Instance inst = test::two_siding_instance();
  inst.name = "io-fixture";
  inst.trains.push_back(test::make_train(inst.station, "T1", "E", "L", 300, 420, true));
  inst.trains.push_back(test::make_train(inst.station, "T2", "E", "L", 600, 600, false));
  inst.balance.enabled = true;
  inst.balance.tolerance = 1;
  inst.outages.push_back({inst.station.node_index("P2"), 900, 960});
  return inst;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("instance serialization round trips") {
  Instance inst = io_instance();
  std::string once = serialize_instance(inst);
  Instance back = parse_instance(once);
  CHECK(serialize_instance(back) == once);
  CHECK(back.name == inst.name);
  CHECK(back.trains.size() == inst.trains.size());
  CHECK(back.balance.enabled);
  CHECK(back.balance.tolerance == 1);
  CHECK(back.outages.size() == 1);
  CHECK(back.station.routes.size() == inst.station.routes.size());

  const std::string path = "tmp_io_instance.json";
  save_instance(inst, path);
  Instance loaded = load_instance(path);
  CHECK(serialize_instance(loaded) == once);
  CHECK(slurp(path) == once);
}

TEST_CASE("loading a missing instance file fails loudly") {
  CHECK_THROWS_WITH_AS(load_instance("no_such_dir/missing.json"),
                       doctest::Contains("cannot open instance file"),
                       std::runtime_error);
}

TEST_CASE("solution files round trip through save and load") {
  Instance inst = io_instance();
  SpaceTimeNetwork net = build_network(inst);
  Solution sol;
  sol.method = "lr";
  sol.bounds = {100.0, 120.5, 0.17, 7, 1.25, "gap"};
  sol.plans = {pick_path(net, 0, "P1", 300, 420), pick_path(net, 1, "M", 600, 600)};

  const std::string path = "tmp_io_solution.json";
  save_solution(net, sol, path);
  Solution back = load_solution(net, path);
  CHECK(back.method == "lr");
  CHECK(back.bounds.lower == doctest::Approx(100.0));
  CHECK(back.bounds.upper == doctest::Approx(120.5));
  CHECK(back.bounds.termination == "gap");
  REQUIRE(back.plans.size() == sol.plans.size());
  for (size_t f = 0; f < sol.plans.size(); ++f) {
    CHECK(back.plans[f].cancelled == sol.plans[f].cancelled);
    CHECK(back.plans[f].arcs == sol.plans[f].arcs);
  }

  SUBCASE("cancelled trains survive the round trip") {
    sol.plans[1] = {1, true, {}};
    save_solution(net, sol, path);
    Solution again = load_solution(net, path);
    CHECK(again.plans[1].cancelled);
    CHECK(again.plans[1].arcs.empty());
    CHECK(again.plans[0].arcs == sol.plans[0].arcs);
  }
}

TEST_CASE("loading a solution validates it against the network") {
  Instance inst = io_instance();
  SpaceTimeNetwork net = build_network(inst);
  Solution sol;
  sol.method = "lr";
  sol.plans = {pick_path(net, 0, "P1", 300, 420), {1, true, {}}};
  const std::string path = "tmp_io_bad_solution.json";

  nlohmann::json base = nlohmann::json::parse(serialize_solution(net, sol));
  auto dump = [&](const nlohmann::json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
  };

  SUBCASE("unknown train id") {
    nlohmann::json j = base;
    j["trains"][0]["id"] = "ZZ";
    dump(j);
    CHECK_THROWS_WITH_AS(load_solution(net, path),
                         doctest::Contains("unknown train ZZ"), std::runtime_error);
  }
  SUBCASE("off-grid event time") {
    nlohmann::json j = base;
    j["trains"][0]["arrival"] = 301;
    dump(j);
    CHECK_THROWS_WITH_AS(load_solution(net, path),
                         doctest::Contains("must align with the macro grid"),
                         std::runtime_error);
  }
  SUBCASE("unknown route") {
    nlohmann::json j = base;
    j["trains"][0]["inbound_route"] = "in_nowhere";
    dump(j);
    CHECK_THROWS_WITH_AS(load_solution(net, path),
                         doctest::Contains("T1: unknown route"), std::runtime_error);
  }
  SUBCASE("time outside the train's network") {
    nlohmann::json j = base;
    j["trains"][0]["arrival"] = 0;
    dump(j);
    CHECK_THROWS_WITH_AS(load_solution(net, path),
                         doctest::Contains("no matching arrival arc"),
                         std::runtime_error);
  }
  SUBCASE("platform contradicts the inbound route") {
    nlohmann::json j = base;
    j["trains"][0]["platform"] = "P2";
    dump(j);
    CHECK_THROWS_WITH_AS(load_solution(net, path),
                         doctest::Contains("inbound route does not reach the platform"),
                         std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(load_solution(net, "no_such_dir/missing.json"),
                         doctest::Contains("cannot open solution file"),
                         std::runtime_error);
  }
}

TEST_CASE("solution JSON reports objective and per-train rows") {
  Instance inst = io_instance();
  SpaceTimeNetwork net = build_network(inst);
  Solution sol;
  sol.method = "heuristic";
  sol.plans = {pick_path(net, 0, "P1", 300, 420), {1, true, {}}};
  nlohmann::json j = nlohmann::json::parse(serialize_solution(net, sol));
  CHECK(j["instance"] == "io-fixture");
  CHECK(j["method"] == "heuristic");
  CHECK(j["feasible"] == true);
  ObjectiveBreakdown ob = objective_value(net, sol);
  CHECK(j["objective"]["total"].get<double>() == doctest::Approx(ob.total));
  CHECK(j["objective"]["cancelled"].get<int>() == 1);
  REQUIRE(j["trains"].size() == 2);
  CHECK(j["trains"][0]["status"] == "scheduled");
  CHECK(j["trains"][0]["platform"] == "P1");
  CHECK(j["trains"][0]["arrival"].get<int>() == 300);
  CHECK(j["trains"][0]["departure"].get<int>() == 420);
  CHECK(j["trains"][1]["status"] == "cancelled");
}

TEST_CASE("iteration log renders as CSV with blank unbounded columns") {
  LrResult res;
  const double inf = std::numeric_limits<double>::infinity();
  res.log.push_back({0, 1.0, 10.5, inf, 10.5, 99.0, 3, 2});
  res.log.push_back({1, 0.5, 11.0, 42.25, 11.0, 42.25, 0, 2});
  std::ostringstream os;
  write_iteration_csv(res, os);
  CHECK(os.str() ==
        "iteration,alpha,lb,ub,best_lb,best_ub,violated_resources,pool_size\n"
        "0,1,10.5,,10.5,99,3,2\n"
        "1,0.5,11,42.25,11,42.25,0,2\n");
}

TEST_CASE("linking dump covers every arc-resource pair") {
  Instance inst = io_instance();
  SpaceTimeNetwork net = build_network(inst);
  std::ostringstream os;
  write_linking_csv(net, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "arc,arc_kind,resource_kind,space,micro_period");
  size_t rows = 0;
  size_t commas_ok = 0;
  while (std::getline(is, line)) {
    ++rows;
    if (std::count(line.begin(), line.end(), ',') == 4) ++commas_ok;
  }
  size_t expect = 0;
  for (int32_t a = 1; a < static_cast<int32_t>(net.arcs().size()); ++a)
    expect += net.sg_links(a).size() + net.siding_links(a).size();
  CHECK(rows == expect);
  CHECK(commas_ok == rows);
  CHECK(rows > 0);
}

TEST_CASE("plan drawing is deterministic SVG") {
  Instance inst = io_instance();
  SpaceTimeNetwork net = build_network(inst);
  Solution sol;
  sol.method = "lr";
  sol.plans = {pick_path(net, 0, "P1", 300, 420), {1, true, {}}};
  std::ostringstream a, b;
  emit_gantt(a, net, sol);
  emit_gantt(b, net, sol);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("<svg") != std::string::npos);
  CHECK(a.str().find("</svg>") != std::string::npos);
  CHECK(a.str().find("P1") != std::string::npos);
}
