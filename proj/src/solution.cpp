#include "tps/solution.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tps {

namespace {

[[noreturn]] void malformed(const SpaceTimeNetwork& net, int32_t f, const std::string& why) {
  const std::string& id = net.instance().trains[f].id;
  throw std::runtime_error("plan for train " + id + ": " + why);
}

// Checks the arrival-wait-departure chain and that every arc belongs to the
// train's own arc set.
void validate_plan(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  int32_t f = plan.train;
  if (f < 0 || f >= net.num_trains())
    throw std::runtime_error("plan references an unknown train");
  if (plan.cancelled) {
    if (!plan.arcs.empty()) malformed(net, f, "cancelled plan must not carry arcs");
    return;
  }
  if (plan.arcs.size() < 2) malformed(net, f, "scheduled plan needs arrival and departure");
  for (int32_t a : plan.arcs)
    if (!net.train_has_arc(f, a))
      malformed(net, f, "arc " + std::to_string(a) + " is not available to this train");

  const Train& t = net.instance().trains[f];
  const STArc& first = net.arc(plan.arcs.front());
  const STArc& last = net.arc(plan.arcs.back());
  if (first.kind != ArcKind::arrival || first.from_node != t.origin)
    malformed(net, f, "plan must start with an arrival arc from the train origin");
  if (last.kind != ArcKind::departure || last.to_node != t.destination)
    malformed(net, f, "plan must end with a departure arc to the train destination");
  int32_t platform = first.to_node;
  if (last.from_node != platform) malformed(net, f, "arrival and departure platform differ");

  int32_t cursor = first.end_period;
  for (size_t i = 1; i + 1 < plan.arcs.size(); ++i) {
    const STArc& w = net.arc(plan.arcs[i]);
    if (w.kind != ArcKind::siding_wait || w.physical != platform)
      malformed(net, f, "interior arcs must be waits on the platform");
    if (w.start_period != cursor) malformed(net, f, "wait arcs are not contiguous");
    cursor = w.end_period;
  }
  if (last.start_period != cursor)
    malformed(net, f, "departure does not follow the last occupied period");

  const TrainBlock& block = net.block(f);
  int dwell = last.start_period - first.end_period;
  bool siding = net.instance().station.nodes[platform].kind == NodeKind::siding;
  if (siding) {
    if (dwell < block.dwell_min_p || dwell > block.dwell_max_p)
      malformed(net, f, "dwell time outside the allowed bounds");
  } else if (dwell != 0) {
    malformed(net, f, "nonstop pass must depart in the arrival period");
  }
}

}  // namespace

int arrival_time_s(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  if (plan.cancelled) malformed(net, plan.train, "cancelled plan has no arrival time");
  return net.arc(plan.arcs.front()).end_period * net.grid().macro_s;
}

int departure_time_s(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  if (plan.cancelled) malformed(net, plan.train, "cancelled plan has no departure time");
  return net.arc(plan.arcs.back()).start_period * net.grid().macro_s;
}

int platform_node(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  if (plan.cancelled) malformed(net, plan.train, "cancelled plan has no platform");
  return net.arc(plan.arcs.front()).to_node;
}

ShiftBreakdown shift_components(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  if (plan.cancelled) malformed(net, plan.train, "cancelled plan has no shifts");
  validate_plan(net, plan);
  const Train& t = net.instance().trains[plan.train];
  return {std::abs(arrival_time_s(net, plan) - t.desired_arrival_s),
          std::abs(departure_time_s(net, plan) - t.desired_departure_s)};
}

double plan_cost(const SpaceTimeNetwork& net, const TrainPlan& plan) {
  validate_plan(net, plan);
  const Instance& in = net.instance();
  if (plan.cancelled) return net.cancellation_cost(plan.train);
  long travel = 0;
  for (int32_t a : plan.arcs) travel += net.arc(a).travel_s;
  const Train& t = in.trains[plan.train];
  long shift = std::abs(arrival_time_s(net, plan) - t.desired_arrival_s) +
               std::abs(departure_time_s(net, plan) - t.desired_departure_s);
  return in.weights.travel * travel + in.weights.shift * shift;
}

ObjectiveBreakdown objective_value(const SpaceTimeNetwork& net, const Solution& sol) {
  if (static_cast<int32_t>(sol.plans.size()) != net.num_trains())
    throw std::runtime_error("solution must contain exactly one plan per train");
  ObjectiveBreakdown out;
  const Instance& in = net.instance();
  for (int32_t f = 0; f < net.num_trains(); ++f) {
    const TrainPlan& plan = sol.plans[f];
    if (plan.train != f) throw std::runtime_error("plans must be ordered by train index");
    validate_plan(net, plan);
    if (plan.cancelled) {
      out.cancelled++;
      out.cancellation_cost += net.cancellation_cost(f);
      continue;
    }
    long travel = 0;
    for (int32_t a : plan.arcs) travel += net.arc(a).travel_s;
    const Train& t = in.trains[f];
    long shift = std::abs(arrival_time_s(net, plan) - t.desired_arrival_s) +
                 std::abs(departure_time_s(net, plan) - t.desired_departure_s);
    out.travel_s += travel;
    out.shift_s += shift;
  }
  out.travel_cost = in.weights.travel * out.travel_s;
  out.shift_cost = in.weights.shift * out.shift_s;
  out.total = out.travel_cost + out.shift_cost + out.cancellation_cost;
  return out;
}

}  // namespace tps
