#pragma once
// Two-level space-time network.
//
// Macroscopic level: arcs over (node, macro period) that carry the routing
// decisions of each train -- inbound (arrival) arcs, outbound (departure)
// arcs, per-period siding wait arcs and a virtual cancellation path.  Source
// and sink arcs are structural only (zero cost, no resources) and stay
// implicit; a stored train path is [arrival, wait*, departure] or virtual.
//
// Microscopic level: unit-capacity resources, one per (switch group, micro
// period) and one per (siding, micro period).  Every macroscopic arc links to
// the micro resources it occupies; these linking sets are what the relaxation
// prices and what the feasibility checker counts.
//
// A micro resource l is linked to an arc when the half-open micro interval
// [l.period * micro_s, (l.period + 1) * micro_s) intersects the arc's
// real-time occupation interval:
//   arrival/departure arc, switch group s crossed at effective offset T:
//       [start_s, start_s + T + sg_clearing)
//   arrival arc into a siding (inbound lock):   [start_s, end_s)
//   departure arc from a siding (clearing):     [start_s, start_s + siding_clearing)
//   siding wait arc:                            [start_s, end_s)

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tps/instance.hpp"

namespace tps {

enum class ArcKind : uint8_t { source, sink, arrival, departure, siding_wait, virtual_path };
const char* to_string(ArcKind k);

enum class ResourceKind : uint8_t { switch_group, siding };

struct MicroResource {
  ResourceKind kind = ResourceKind::switch_group;
  int32_t space = -1;   // switch-group index or siding node index
  int32_t period = -1;  // micro period
};

// Dense id space for micro resources: switch groups first, sidings after.
struct ResourceSpace {
  int32_t micro_periods = 0;
  int32_t n_sg = 0;
  std::vector<int32_t> sidings;         // siding ordinal -> node index
  std::vector<int32_t> siding_ordinal;  // node index -> ordinal (or -1)

  int32_t total() const {
    return (n_sg + static_cast<int32_t>(sidings.size())) * micro_periods;
  }
  int32_t sg_resource(int32_t sg, int32_t p) const { return sg * micro_periods + p; }
  int32_t siding_resource(int32_t ordinal, int32_t p) const {
    return (n_sg + ordinal) * micro_periods + p;
  }
  MicroResource decode(int32_t r) const;
};

struct STArc {
  ArcKind kind = ArcKind::arrival;
  // Route index for arrival/departure arcs, siding node index for wait arcs,
  // -1 for the virtual path.
  int32_t physical = -1;
  int32_t from_node = -1;
  int32_t to_node = -1;
  int32_t start_period = 0;  // macro period of entering the arc
  int32_t end_period = 0;    // macro period of leaving the arc
  int32_t travel_s = 0;      // objective travel-time contribution
};

// Per-train adjacency used by the block solver.  All references are slots
// into the train's own arc list (0 .. n_f-1), not global arc ids.
struct TrainBlock {
  struct Platform {
    int32_t node = -1;
    bool is_siding = true;
    int32_t wait_base = 0;                         // first wait period
    std::vector<int32_t> wait_slots;               // by period - wait_base; -1 gaps
    int32_t dep_base = 0;                          // first departure period
    std::vector<std::vector<int32_t>> dep_slots;   // by period - dep_base
  };
  std::vector<int32_t> arrival_slots;
  std::vector<Platform> platforms;
  int32_t dwell_min_p = 0;  // min dwell in macro periods (sidings)
  int32_t dwell_max_p = 0;
  int32_t virtual_slot = -1;
};

class SpaceTimeNetwork {
 public:
  const Instance& instance() const { return inst_; }
  const ResourceSpace& resources() const { return res_; }
  const TimeGrid& grid() const { return inst_.grid; }

  // ---- global arc table -----------------------------------------------
  const std::vector<STArc>& arcs() const { return arcs_; }
  const STArc& arc(int32_t a) const { return arcs_[a]; }
  int32_t virtual_arc() const { return 0; }  // shared by all trains

  // Linking sets (CSR over global arcs).  The switch-group channel holds
  // switch-group resources; the siding channel holds siding resources whose
  // meaning depends on the arc kind (inbound lock / outbound clearing /
  // dwell occupation).
  std::span<const int32_t> sg_links(int32_t a) const {
    return {sg_links_.data() + sg_off_[a], sg_links_.data() + sg_off_[a + 1]};
  }
  std::span<const int32_t> siding_links(int32_t a) const {
    return {sd_links_.data() + sd_off_[a], sd_links_.data() + sd_off_[a + 1]};
  }
  // Arrival/departure arcs linked to the given resource (inverse incidence).
  std::span<const int32_t> arcs_of_resource(int32_t r) const {
    return {inc_arcs_.data() + inc_off_[r], inc_arcs_.data() + inc_off_[r + 1]};
  }

  // ---- per-train views ---------------------------------------------------
  int32_t num_trains() const { return static_cast<int32_t>(inst_.trains.size()); }
  int32_t train_arc_begin(int32_t f) const { return train_off_[f]; }
  int32_t train_arc_count(int32_t f) const { return train_off_[f + 1] - train_off_[f]; }
  std::span<const int32_t> train_arcs(int32_t f) const {
    return {train_arcs_.data() + train_off_[f], train_arcs_.data() + train_off_[f + 1]};
  }
  // Raw (multiplier-free) cost of each train-arc slot: travel + shift terms,
  // cancellation penalty on the virtual slot.
  std::span<const double> raw_costs(int32_t f) const {
    return {raw_costs_.data() + train_off_[f], raw_costs_.data() + train_off_[f + 1]};
  }
  std::span<const double> all_raw_costs() const { return raw_costs_; }
  std::span<const int32_t> all_train_arc_ids() const { return train_arcs_; }
  const TrainBlock& block(int32_t f) const { return blocks_[f]; }
  bool train_has_arc(int32_t f, int32_t arc) const;
  double cancellation_cost(int32_t f) const { return cancel_cost_[f]; }

  int32_t total_train_arcs() const { return static_cast<int32_t>(train_arcs_.size()); }

 private:
  friend SpaceTimeNetwork build_network(const Instance&, int);
  explicit SpaceTimeNetwork(Instance inst) : inst_(std::move(inst)) {}

  Instance inst_;  // owned copy; the network must outlive its callers' edits
  ResourceSpace res_;
  std::vector<STArc> arcs_;
  std::vector<int64_t> sg_off_, sd_off_, inc_off_;
  std::vector<int32_t> sg_links_, sd_links_, inc_arcs_;
  std::vector<int32_t> train_off_, train_arcs_;
  std::vector<double> raw_costs_;
  std::vector<double> cancel_cost_;
  std::vector<TrainBlock> blocks_;
};

// Builds the network for a validated instance.  Throws std::runtime_error
// naming the offending train when a shift window leaves no feasible arc
// inside the horizon.  `threads` <= 1 runs the serial reference path.
SpaceTimeNetwork build_network(const Instance& inst, int threads = 0);

// ---- paths and occupations -------------------------------------------------

struct TrainPlan {
  int32_t train = -1;
  bool cancelled = false;
  std::vector<int32_t> arcs;  // global ids: arrival, wait*, departure
};

// Micro resources occupied by one train plan, grouped by the model variable
// that locks them.  Lists are per-arc concatenations (multiset); call
// dedup_within_types() before counting capacity, where each (train, resource,
// type) pair contributes at most one unit.
struct Occupation {
  std::vector<int32_t> sg;            // switch-group resources of arrival+departure arcs
  std::vector<int32_t> siding_dwell;  // siding resources of wait arcs
  std::vector<int32_t> siding_lock;   // siding resources locked by the inbound run
  std::vector<int32_t> siding_clear;  // siding resources cleared behind a departure
  void dedup_within_types();
  size_t total() const {
    return sg.size() + siding_dwell.size() + siding_lock.size() + siding_clear.size();
  }
};

Occupation occupied_resources(const SpaceTimeNetwork& net, const TrainPlan& plan);

}  // namespace tps
