#include "tps/instance.hpp"

#include <algorithm>
#include <cmath>

namespace tps {

namespace {
bool integral(double v) { return std::floor(v) == v; }
}  // namespace

bool Instance::integral_costs() const {
  if (!integral(weights.travel) || !integral(weights.shift)) return false;
  for (const auto& t : trains)
    if (!integral(train_cancellation_cost(t))) return false;
  return true;
}

int Instance::derived_cap_base() const {
  if (balance.cap_base >= 0) return balance.cap_base;
  int sidings = static_cast<int>(station.siding_nodes().size());
  if (sidings == 0) return 0;
  int stopping = 0;
  for (const auto& t : trains) stopping += t.stops ? 1 : 0;
  return (stopping + sidings - 1) / sidings;
}

double Instance::train_cancellation_cost(const Train& t) const {
  if (t.cancellation_cost >= 0) return t.cancellation_cost;
  // Default: dominates any schedulable path so cancellation stays a last
  // resort -- a full-horizon run plus the worst admissible shifts, plus one.
  double worst_shift =
      std::max(std::abs(t.arrival_window.lo_s), std::abs(t.arrival_window.hi_s)) +
      std::max(std::abs(t.departure_window.lo_s), std::abs(t.departure_window.hi_s));
  return weights.travel * grid.horizon_s + weights.shift * worst_shift + 1.0;
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out = validate_station(inst.station);
  auto bad = [&](const std::string& el, const std::string& msg) {
    out.push_back({el, msg});
  };

  const auto& g = inst.grid;
  if (g.macro_s <= 0 || g.micro_s <= 0 || g.horizon_s <= 0)
    bad("grid", "horizon and granularities must be positive");
  else {
    if (g.horizon_s % g.macro_s != 0)
      bad("grid", "macro granularity must divide the horizon");
    if (g.horizon_s % g.micro_s != 0)
      bad("grid", "micro granularity must divide the horizon");
  }
  if (inst.weights.travel < 0 || inst.weights.shift < 0)
    bad("weights", "objective weights must be nonnegative");

  const int32_t n_nodes = static_cast<int32_t>(inst.station.nodes.size());
  std::vector<std::string> seen;
  for (const auto& t : inst.trains) {
    if (std::find(seen.begin(), seen.end(), t.id) != seen.end())
      bad(t.id, "duplicate train id");
    seen.push_back(t.id);

    if (t.origin < 0 || t.origin >= n_nodes || t.destination < 0 ||
        t.destination >= n_nodes) {
      bad(t.id, "train endpoint refers to an unknown node");
      continue;
    }
    if (inst.station.nodes[t.origin].kind != NodeKind::entering)
      bad(t.id, "train origin must be an entering node");
    if (inst.station.nodes[t.destination].kind != NodeKind::leaving)
      bad(t.id, "train destination must be a leaving node");

    if (t.arrival_window.lo_s > t.arrival_window.hi_s ||
        t.departure_window.lo_s > t.departure_window.hi_s)
      bad(t.id, "empty shift window");
    if (t.dwell_min_s < 0 || t.dwell_max_s < t.dwell_min_s)
      bad(t.id, "dwell bounds must satisfy 0 <= min <= max");
    if (!t.stops && (t.dwell_min_s != 0))
      bad(t.id, "nonstop train cannot require dwell");

    int a_lo = t.desired_arrival_s + t.arrival_window.lo_s;
    int a_hi = t.desired_arrival_s + t.arrival_window.hi_s;
    int d_lo = t.desired_departure_s + t.departure_window.lo_s;
    int d_hi = t.desired_departure_s + t.departure_window.hi_s;
    if (a_lo < 0 || a_hi > inst.grid.horizon_s || d_lo < 0 || d_hi > inst.grid.horizon_s)
      bad(t.id, "shift window leaves the planning horizon");
    if (d_hi < a_lo + t.dwell_min_s)
      bad(t.id, "departure window incompatible with arrival window and minimum dwell");
  }

  for (const auto& o : inst.outages) {
    if (o.node < 0 || o.node >= n_nodes || !inst.station.is_platform(o.node))
      bad("outage", "outage must reference a platform node");
    if (o.from_s < 0 || o.to_s <= o.from_s)
      bad("outage", "outage window must be a nonempty [from, to) interval");
  }

  if (inst.balance.enabled && inst.station.siding_nodes().empty())
    bad("balance", "balancing requires at least one siding");
  return out;
}

}  // namespace tps
