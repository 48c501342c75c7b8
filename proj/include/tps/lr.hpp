#pragma once
// Two-level Lagrangian relaxation.
//
// The unit-capacity constraints on micro resources are dualized with
// multipliers lambda >= 0.  The relaxed problem separates into one shortest
// path per train over aggregated arc costs
//     c_hat(arc) = raw(arc) + sum of lambda over the arc's linked resources
// (arrival arcs into sidings additionally pay the balance multiplier of the
// siding).  Each iteration solves all blocks, takes
//     LB = sum of block costs - sum of all multipliers
//          - sum over sidings of balance_lambda * cap        (balance mode)
// as a lower bound, repairs the block solution into a feasible upper bound
// with the sequential heuristic, and moves the multipliers along the
// subgradient  lambda += alpha * (occupation - capacity), clamped at 0.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tps/multiplier_pool.hpp"
#include "tps/network.hpp"
#include "tps/solution.hpp"
#include "tps/train_dp.hpp"

namespace tps {

enum class UbPolicy { iterative, final_only };
enum class UpdateMode { dynamic_pool, dense };

struct IterationRecord {
  int m = 0;
  double alpha = 1.0;
  double lb = 0;                                      // LB^m
  double ub = std::numeric_limits<double>::infinity();  // UB^m (inf: none this iteration)
  double best_lb = 0;
  double best_ub = 0;
  int violated_resources = 0;
  size_t pool_size = 0;
  size_t route_pool_size = 0;
  const MultiplierPool* pool = nullptr;                 // state after this iteration's update
  const std::vector<double>* balance_lambda = nullptr;
  const Solution* lb_solution = nullptr;
  const Solution* ub_solution = nullptr;  // null when no UB was built this iteration
};

struct LrParams {
  int max_iterations = 1500;
  double time_limit_s = 0;  // <= 0: none
  double gap_tol = 0;       // relative gap target; 0 keeps only the exact stops
  int m_alpha = 20;         // step-size freeze point
  UbPolicy ub_policy = UbPolicy::iterative;
  UpdateMode update_mode = UpdateMode::dynamic_pool;
  uint64_t seed = 1;
  int threads = 0;  // 0: library default; 1: serial reference kernels
  std::function<void(const IterationRecord&)> on_iteration;
};

struct IterationLogRow {
  int m;
  double alpha, lb, ub, best_lb, best_ub;
  int violated;
  size_t pool_size;
};

struct LrResult {
  Solution solution;  // best feasible plan found
  double best_lb = -std::numeric_limits<double>::infinity();
  double best_ub = std::numeric_limits<double>::infinity();
  double gap = 1.0;
  int iterations = 0;
  double wall_s = 0;
  std::string termination;
  std::vector<IterationLogRow> log;
};

// Step size schedule: 1/(m+1), frozen at 1/(m_alpha+1) from iteration
// m_alpha on.
double step_size(int m, int m_alpha);

// Relative duality gap (upper - lower) / upper, clamped at 0.  Falls back to
// 1 when there is no positive finite upper bound (0 if the bounds coincide).
double duality_gap(double lower, double upper);

// Aggregated costs for every train-arc slot, written into `out` (size =
// net.total_train_arcs()).  `balance_lambda` may be empty when balancing is
// off.  Serial reference and OpenMP variants must agree bit for bit.
void aggregated_costs_serial(const SpaceTimeNetwork& net, const MultiplierPool& pool,
                             std::span<const double> balance_lambda,
                             std::vector<double>& out);
void aggregated_costs_parallel(const SpaceTimeNetwork& net, const MultiplierPool& pool,
                               std::span<const double> balance_lambda,
                               std::vector<double>& out, int threads);

// LB = sum(block_costs) - pool.total() - cap * sum(balance_lambda).
double lower_bound(std::span<const BlockResult> blocks, const MultiplierPool& pool,
                   std::span<const double> balance_lambda, int balance_cap);

// Occupation counts per resource for a set of plans (within-train duplicates
// collapse per variable type).  `touched` collects the distinct resources.
void occupation_counts(const SpaceTimeNetwork& net, const std::vector<TrainPlan>& plans,
                       std::vector<int32_t>& counts, std::vector<int32_t>& touched);

// Dense reference update: walks every resource in the space.
void subgradient_update(MultiplierPool& pool, std::span<const int32_t> counts,
                        double alpha);

// Pool-based update touching only occupied or pooled resources; also grows
// the route-arc pool with the arrival/departure arcs incident to violated
// switch-group resources.  Must produce exactly the dense result.
void dynamic_pool_update(MultiplierPool& pool, std::vector<int32_t>& route_arc_pool,
                         const SpaceTimeNetwork& net, std::span<const int32_t> counts,
                         std::span<const int32_t> touched, double alpha);

LrResult run(const SpaceTimeNetwork& net, const LrParams& params = {});

}  // namespace tps
