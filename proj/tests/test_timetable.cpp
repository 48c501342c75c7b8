#include <doctest.h>

#include "support/test_oracles.hpp"
#include "tps/instance.hpp"

using namespace tps;

namespace {

Instance base_instance() {
  Instance inst = test::two_siding_instance();
  inst.trains.push_back(test::make_train(inst.station, "T1", "E", "L", 300, 420, true));
  return inst;
}

bool mentions(const std::vector<Violation>& vs, const std::string& element) {
  for (const auto& v : vs)
    if (v.element == element) return true;
  return false;
}

}  // namespace

TEST_CASE("grid period counts") {
  TimeGrid g{3600, 15, 5};
  CHECK(g.macro_periods() == 240);
  CHECK(g.micro_periods() == 720);
}

TEST_CASE("a consistent instance validates cleanly") {
  CHECK(validate_instance(base_instance()).empty());
}

TEST_CASE("instance validation catches timetable defects") {
  SUBCASE("granularities must divide the horizon") {
    Instance inst = base_instance();
    inst.grid.macro_s = 13;
    CHECK(mentions(validate_instance(inst), "grid"));
    inst = base_instance();
    inst.grid.micro_s = 7;
    CHECK(mentions(validate_instance(inst), "grid"));
  }
  SUBCASE("negative weights") {
    Instance inst = base_instance();
    inst.weights.shift = -1;
    CHECK(mentions(validate_instance(inst), "weights"));
  }
  SUBCASE("duplicate train ids") {
    Instance inst = base_instance();
    inst.trains.push_back(inst.trains[0]);
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("origin must be entering, destination leaving") {
    Instance inst = base_instance();
    inst.trains[0].origin = inst.station.node_index("P1");
    CHECK(mentions(validate_instance(inst), "T1"));
    inst = base_instance();
    inst.trains[0].destination = inst.station.node_index("E");
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("empty shift window") {
    Instance inst = base_instance();
    inst.trains[0].arrival_window = {10, -10};
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("dwell bounds") {
    Instance inst = base_instance();
    inst.trains[0].dwell_max_s = 30;  // < dwell_min 60
    CHECK(mentions(validate_instance(inst), "T1"));
    inst = base_instance();
    inst.trains[0].dwell_min_s = -1;
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("nonstop trains cannot require dwell") {
    Instance inst = base_instance();
    inst.trains[0].stops = false;
    inst.trains[0].dwell_min_s = 60;
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("windows must stay inside the horizon") {
    Instance inst = base_instance();
    inst.trains[0].desired_arrival_s = 60;  // window lo -120 leaves the horizon
    CHECK(mentions(validate_instance(inst), "T1"));
    inst = base_instance();
    inst.trains[0].desired_departure_s = inst.grid.horizon_s;  // hi +300 leaves it
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("departure window must leave room for the minimum dwell") {
    Instance inst = base_instance();
    inst.trains[0].dwell_min_s = 600;
    inst.trains[0].dwell_max_s = 700;
    // a_lo = 180, d_hi = 720 < 180 + 600
    CHECK(mentions(validate_instance(inst), "T1"));
  }
  SUBCASE("outages must reference platforms with nonempty windows") {
    Instance inst = base_instance();
    inst.outages.push_back({inst.station.node_index("E"), 0, 600});
    CHECK(mentions(validate_instance(inst), "outage"));
    inst = base_instance();
    inst.outages.push_back({inst.station.node_index("P1"), 600, 600});
    CHECK(mentions(validate_instance(inst), "outage"));
    inst = base_instance();
    inst.outages.push_back({inst.station.node_index("P1"), 0, 600});
    CHECK(validate_instance(inst).empty());
  }
  SUBCASE("balancing requires sidings") {
    Instance inst = base_instance();
    inst.balance.enabled = true;
    CHECK(validate_instance(inst).empty());
    for (auto& n : inst.station.nodes)
      if (n.kind == NodeKind::siding) n.kind = NodeKind::mainline;
    inst.station.routes.clear();  // avoid unrelated endpoint violations
    CHECK(mentions(validate_instance(inst), "balance"));
  }
}

TEST_CASE("integral cost detection") {
  Instance inst = base_instance();
  CHECK(inst.integral_costs());
  inst.weights.shift = 0.5;
  CHECK_FALSE(inst.integral_costs());
  inst.weights.shift = 1.0;
  inst.trains[0].cancellation_cost = 10.25;
  CHECK_FALSE(inst.integral_costs());
}

TEST_CASE("derived balance cap") {
  Instance inst = base_instance();  // 1 stopping train, 2 sidings
  CHECK(inst.derived_cap_base() == 1);
  for (int i = 0; i < 4; ++i)
    inst.trains.push_back(
        test::make_train(inst.station, "X" + std::to_string(i), "E", "L", 300, 420, true));
  CHECK(inst.derived_cap_base() == 3);  // ceil(5 / 2)
  inst.trains[0].stops = false;
  inst.trains[0].dwell_min_s = inst.trains[0].dwell_max_s = 0;
  CHECK(inst.derived_cap_base() == 2);  // ceil(4 / 2)
  inst.balance.cap_base = 7;
  CHECK(inst.derived_cap_base() == 7);
}

TEST_CASE("default cancellation cost dominates any schedulable path") {
  Instance inst = base_instance();
  const Train& t = inst.trains[0];
  // horizon * w_travel + worst shifts * w_shift + 1
  CHECK(inst.train_cancellation_cost(t) == doctest::Approx(1200 + (120 + 300) + 1));
  Train o = t;
  o.cancellation_cost = 42.0;
  CHECK(inst.train_cancellation_cost(o) == 42.0);
}
