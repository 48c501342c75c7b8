#include <doctest.h>

#include "support/test_oracles.hpp"
#include "tps/station.hpp"

using namespace tps;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& element) {
  for (const auto& v : vs)
    if (v.element == element) return true;
  return false;
}

}  // namespace

TEST_CASE("enum names round-trip") {
  NodeKind nk;
  for (NodeKind k : {NodeKind::entering, NodeKind::leaving, NodeKind::siding,
                     NodeKind::mainline}) {
    CHECK(parse_node_kind(to_string(k), nk));
    CHECK(nk == k);
  }
  CHECK_FALSE(parse_node_kind("platform", nk));

  InterlockingMode im;
  for (InterlockingMode m :
       {InterlockingMode::sectional_release, InterlockingMode::route_release}) {
    CHECK(parse_interlocking(to_string(m), im));
    CHECK(im == m);
  }
  CHECK_FALSE(parse_interlocking("none", im));
}

TEST_CASE("index lookups and siding ordinals") {
  Station st = test::two_siding_station();
  CHECK(st.node_index("E") == 0);
  CHECK(st.node_index("P2") == 3);
  CHECK(st.node_index("missing") == -1);
  CHECK(st.sg_index("GB") == 1);
  CHECK(st.sg_index("GZ") == -1);
  CHECK(st.route_index("out_M_L") >= 0);
  CHECK(st.route_index("nope") == -1);

  CHECK(st.is_platform(st.node_index("P1")));
  CHECK(st.is_platform(st.node_index("M")));
  CHECK_FALSE(st.is_platform(st.node_index("E")));
  CHECK_FALSE(st.is_platform(st.node_index("L")));

  auto sidings = st.siding_nodes();
  REQUIRE(sidings.size() == 2);
  CHECK(sidings[0] == st.node_index("P1"));
  CHECK(sidings[1] == st.node_index("P2"));
}

TEST_CASE("effective release offsets per interlocking mode") {
  Station st = test::two_siding_station();
  const PhysicalRoute& r = st.routes[st.route_index("in_E_P2")];  // run 90, GA@45
  CHECK(effective_sg_offset(r, r.sg_occupations[0], InterlockingMode::sectional_release) ==
        45);
  CHECK(effective_sg_offset(r, r.sg_occupations[0], InterlockingMode::route_release) ==
        90);
}

TEST_CASE("a well-formed station validates cleanly") {
  CHECK(validate_station(test::two_siding_station()).empty());
}

TEST_CASE("station validation catches structural defects") {
  SUBCASE("duplicate node id") {
    Station st = test::two_siding_station();
    st.nodes.push_back({"P1", NodeKind::siding});
    CHECK(has_violation(validate_station(st), "P1"));
  }
  SUBCASE("duplicate switch group id") {
    Station st = test::two_siding_station();
    st.switch_groups.push_back({"GA"});
    CHECK_FALSE(validate_station(st).empty());
  }
  SUBCASE("inbound route must start at an entering node") {
    Station st = test::two_siding_station();
    st.routes[0].origin = st.node_index("L");
    CHECK_FALSE(validate_station(st).empty());
  }
  SUBCASE("inbound route must end on a platform") {
    Station st = test::two_siding_station();
    st.routes[0].destination = st.node_index("L");
    CHECK_FALSE(validate_station(st).empty());
  }
  SUBCASE("outbound route must end at a leaving node") {
    Station st = test::two_siding_station();
    st.routes[st.route_index("out_P1_L")].destination = st.node_index("E");
    CHECK_FALSE(validate_station(st).empty());
  }
  SUBCASE("release offset outside (0, running_time]") {
    Station st = test::two_siding_station();
    st.routes[0].sg_occupations[0].release_offset_s = 0;
    CHECK_FALSE(validate_station(st).empty());
    st.routes[0].sg_occupations[0].release_offset_s = 61;  // running time is 60
    CHECK_FALSE(validate_station(st).empty());
    st.routes[0].sg_occupations[0].release_offset_s = 60;
    CHECK(validate_station(st).empty());
  }
  SUBCASE("unknown switch group reference") {
    Station st = test::two_siding_station();
    st.routes[0].sg_occupations[0].sg = 99;
    CHECK_FALSE(validate_station(st).empty());
  }
  SUBCASE("negative clearing times") {
    Station st = test::two_siding_station();
    st.sg_clearing_s = -1;
    CHECK_FALSE(validate_station(st).empty());
    st.sg_clearing_s = 30;
    st.siding_clearing_s = -5;
    CHECK_FALSE(validate_station(st).empty());
  }
  SUBCASE("nonpositive running time") {
    Station st = test::two_siding_station();
    st.routes[0].running_time_s = 0;
    st.routes[0].sg_occupations.clear();
    CHECK_FALSE(validate_station(st).empty());
  }
}
