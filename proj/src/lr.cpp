#include "tps/lr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tps/heuristic.hpp"
#include "tps/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tps {

double step_size(int m, int m_alpha) { return 1.0 / (std::min(m, m_alpha) + 1); }

double duality_gap(double lower, double upper) {
  if (upper > 0 && std::isfinite(upper)) return std::max(0.0, (upper - lower) / upper);
  return upper == lower ? 0.0 : 1.0;
}

namespace {

constexpr uint64_t kSeedBlocks = 0xB10C;
constexpr uint64_t kSeedOrder = 0x0BDE;
constexpr uint64_t kSeedSched = 0x5CED;

void compute_penalties(const SpaceTimeNetwork& net, const MultiplierPool& pool,
                       std::span<const double> balance_lambda,
                       std::vector<double>& penalty, int nthreads) {
  const int32_t A = static_cast<int32_t>(net.arcs().size());
  penalty.assign(A, 0.0);
  const std::vector<double>& lam = pool.dense();
  const auto& ordinal = net.resources().siding_ordinal;
  (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
  for (int32_t a = 1; a < A; ++a) {
    double p = 0;
    for (int32_t r : net.sg_links(a)) p += lam[r];
    for (int32_t r : net.siding_links(a)) p += lam[r];
    if (!balance_lambda.empty()) {
      const STArc& arc = net.arc(a);
      if (arc.kind == ArcKind::arrival) {
        int32_t ord = ordinal[arc.to_node];
        if (ord >= 0) p += balance_lambda[ord];
      }
    }
    penalty[a] = p;
  }
}

void aggregate(const SpaceTimeNetwork& net, const MultiplierPool& pool,
               std::span<const double> balance_lambda, std::vector<double>& out,
               int nthreads) {
  auto raw = net.all_raw_costs();
  out.resize(raw.size());
  bool bal_zero = true;
  for (double v : balance_lambda) bal_zero &= v == 0.0;
  if (pool.support().empty() && bal_zero) {
    std::copy(raw.begin(), raw.end(), out.begin());
    return;
  }
  std::vector<double> penalty;
  compute_penalties(net, pool, balance_lambda, penalty, nthreads);
  auto ids = net.all_train_arc_ids();
  const int64_t N = static_cast<int64_t>(ids.size());
  (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
  for (int64_t i = 0; i < N; ++i) out[i] = raw[i] + penalty[ids[i]];
}

int default_threads(int threads) {
#ifdef _OPENMP
  return threads <= 0 ? omp_get_max_threads() : threads;
#else
  (void)threads;
  return 1;
#endif
}

// Objective of a set of plans without per-arc membership validation (the
// plans come from our own solvers); same value as objective_value().
double objective_total(const SpaceTimeNetwork& net, const std::vector<TrainPlan>& plans) {
  const Instance& in = net.instance();
  double total = 0;
  for (const TrainPlan& p : plans) {
    if (p.cancelled) {
      total += net.cancellation_cost(p.train);
      continue;
    }
    long travel = 0;
    for (int32_t a : p.arcs) travel += net.arc(a).travel_s;
    const Train& t = in.trains[p.train];
    int arr = net.arc(p.arcs.front()).end_period * in.grid.macro_s;
    int dep = net.arc(p.arcs.back()).start_period * in.grid.macro_s;
    total += in.weights.travel * travel +
             in.weights.shift *
                 (std::abs(arr - t.desired_arrival_s) + std::abs(dep - t.desired_departure_s));
  }
  return total;
}

}  // namespace

void aggregated_costs_serial(const SpaceTimeNetwork& net, const MultiplierPool& pool,
                             std::span<const double> balance_lambda,
                             std::vector<double>& out) {
  aggregate(net, pool, balance_lambda, out, 1);
}

void aggregated_costs_parallel(const SpaceTimeNetwork& net, const MultiplierPool& pool,
                               std::span<const double> balance_lambda,
                               std::vector<double>& out, int threads) {
  aggregate(net, pool, balance_lambda, out, default_threads(threads));
}

double lower_bound(std::span<const BlockResult> blocks, const MultiplierPool& pool,
                   std::span<const double> balance_lambda, int balance_cap) {
  double sum = 0;
  for (const BlockResult& b : blocks) sum += b.cost;
  sum -= pool.total();
  for (double v : balance_lambda) sum -= v * balance_cap;
  return sum;
}

void occupation_counts(const SpaceTimeNetwork& net, const std::vector<TrainPlan>& plans,
                       std::vector<int32_t>& counts, std::vector<int32_t>& touched) {
  counts.assign(net.resources().total(), 0);
  touched.clear();
  for (const TrainPlan& p : plans) {
    Occupation occ = occupied_resources(net, p);
    occ.dedup_within_types();
    for (const auto* list : {&occ.sg, &occ.siding_dwell, &occ.siding_lock, &occ.siding_clear})
      for (int32_t r : *list) {
        if (counts[r]++ == 0) touched.push_back(r);
      }
  }
  std::sort(touched.begin(), touched.end());
}

void subgradient_update(MultiplierPool& pool, std::span<const int32_t> counts,
                        double alpha) {
  const int32_t R = pool.capacity();
  for (int32_t r = 0; r < R; ++r) {
    double lam = pool.get(r);
    int g = counts[r] - 1;
    if (lam == 0.0 && g <= 0) continue;
    pool.set(r, std::max(0.0, lam + alpha * g));
  }
}

void dynamic_pool_update(MultiplierPool& pool, std::vector<int32_t>& route_arc_pool,
                         const SpaceTimeNetwork& net, std::span<const int32_t> counts,
                         std::span<const int32_t> touched, double alpha) {
  // decay pooled resources that fell out of use this iteration
  std::vector<int32_t> pooled = pool.support();  // snapshot: set() edits the support
  for (int32_t r : pooled)
    if (counts[r] == 0) pool.set(r, std::max(0.0, pool.get(r) + alpha * (0 - 1)));

  const int32_t sg_space = net.resources().n_sg * net.resources().micro_periods;
  std::vector<int32_t> grown;
  for (int32_t r : touched) {
    double lam = pool.get(r);
    int g = counts[r] - 1;
    if (lam != 0.0 || g > 0) pool.set(r, std::max(0.0, lam + alpha * g));
    if (g > 0 && r < sg_space) {
      for (int32_t a : net.arcs_of_resource(r)) {
        ArcKind k = net.arc(a).kind;
        if (k == ArcKind::arrival || k == ArcKind::departure) grown.push_back(a);
      }
    }
  }
  if (!grown.empty()) {
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    std::vector<int32_t> merged;
    merged.reserve(route_arc_pool.size() + grown.size());
    std::set_union(route_arc_pool.begin(), route_arc_pool.end(), grown.begin(),
                   grown.end(), std::back_inserter(merged));
    route_arc_pool = std::move(merged);
  }
}

LrResult run(const SpaceTimeNetwork& net, const LrParams& params) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - t_start).count();
  };

  const Instance& in = net.instance();
  const ResourceSpace& res = net.resources();
  const int32_t F = net.num_trains();
  const bool serial = params.threads == 1;
  const int nthreads = default_threads(params.threads);

  const bool balance_on = in.balance.enabled && in.balance.tolerance >= 0;
  const int balance_cap = balance_on ? in.derived_cap_base() + in.balance.tolerance : -1;
  std::vector<double> bal_lambda(balance_on ? res.sidings.size() : 0, 0.0);

  MultiplierPool pool(res.total());
  std::vector<int32_t> route_arc_pool;
  std::vector<double> costs;
  std::vector<BlockResult> blocks;
  std::vector<int32_t> counts, touched, arrivals_per_siding(res.sidings.size(), 0);

  LrResult result;
  result.solution.method = "lr";
  const bool integral = in.integral_costs();
  bool have_ub = false;
  Solution best_ub;
  Solution last_relaxed;  // X_LB of the latest iteration, feeds the final repair

  int m = 0;
  for (; m < params.max_iterations; ++m) {
    const double alpha = step_size(m, params.m_alpha);

    if (serial)
      aggregated_costs_serial(net, pool, bal_lambda, costs);
    else
      aggregated_costs_parallel(net, pool, bal_lambda, costs, params.threads);

    uint64_t block_seed = derive_seed(params.seed, kSeedBlocks, m);
    if (serial)
      solve_blocks_serial(net, costs, block_seed, blocks);
    else
      solve_blocks_parallel(net, costs, block_seed, blocks, params.threads);

    const double lb = lower_bound(blocks, pool, bal_lambda, balance_cap);
    result.best_lb = std::max(result.best_lb, lb);

    Solution lb_sol;
    lb_sol.method = "lr-relaxed";
    lb_sol.plans.resize(F);
    for (int32_t f = 0; f < F; ++f)
      lb_sol.plans[f] = {f, blocks[f].cancelled, std::move(blocks[f].arcs)};

    occupation_counts(net, lb_sol.plans, counts, touched);
    int violated = 0;
    for (int32_t r : touched) violated += counts[r] > 1;
    bool balance_ok = true;
    if (balance_on) {
      std::fill(arrivals_per_siding.begin(), arrivals_per_siding.end(), 0);
      for (const TrainPlan& p : lb_sol.plans)
        if (!p.cancelled) {
          int32_t ord = res.siding_ordinal[net.arc(p.arcs.front()).to_node];
          if (ord >= 0) arrivals_per_siding[ord]++;
        }
      for (size_t i = 0; i < arrivals_per_siding.size(); ++i)
        balance_ok &= arrivals_per_siding[i] <= balance_cap;
    }
    const bool lb_feasible = violated == 0 && balance_ok;

    // ---- upper bound ------------------------------------------------------
    double ub_m = std::numeric_limits<double>::infinity();
    Solution ub_sol;
    const Solution* ub_ptr = nullptr;
    if (lb_feasible) {
      ub_m = objective_total(net, lb_sol.plans);
      ub_sol = lb_sol;
      ub_sol.method = "lr";
      ub_ptr = &ub_sol;
    } else if (params.ub_policy == UbPolicy::iterative) {
      auto conflicts = conflict_counts(net, lb_sol.plans);
      auto order = priority_order(conflicts, derive_seed(params.seed, kSeedOrder, m));
      ub_sol = schedule_sequentially(net, order, derive_seed(params.seed, kSeedSched, m),
                                     balance_cap);
      ub_sol.method = "lr";
      ub_m = objective_total(net, ub_sol.plans);
      ub_ptr = &ub_sol;
    }
    if (ub_ptr && ub_m < result.best_ub) {
      result.best_ub = ub_m;
      best_ub = *ub_ptr;
      have_ub = true;
    }

    // ---- termination ------------------------------------------------------
    const bool all_lambda_zero = pool.size() == 0 && bal_lambda.size() ==
                                     static_cast<size_t>(std::count(bal_lambda.begin(),
                                                                    bal_lambda.end(), 0.0));
    std::string stop;
    if (lb_feasible && all_lambda_zero) stop = "optimal";
    double gap = duality_gap(result.best_lb, result.best_ub);
    if (stop.empty() && have_ub && gap <= params.gap_tol) stop = "gap";
    if (stop.empty() && integral && have_ub && result.best_ub - result.best_lb < 1.0 - 1e-9)
      stop = "integral";
    if (stop.empty() && m + 1 >= params.max_iterations) stop = "max_iterations";
    if (stop.empty() && params.time_limit_s > 0 && elapsed() >= params.time_limit_s)
      stop = "time_limit";

    // ---- multiplier update (skipped on the final iteration) ---------------
    if (stop.empty()) {
      if (params.update_mode == UpdateMode::dense)
        subgradient_update(pool, counts, alpha);
      else
        dynamic_pool_update(pool, route_arc_pool, net, counts, touched, alpha);
      if (balance_on)
        for (size_t i = 0; i < bal_lambda.size(); ++i)
          bal_lambda[i] =
              std::max(0.0, bal_lambda[i] + alpha * (arrivals_per_siding[i] - balance_cap));
    }

    IterationRecord rec;
    rec.m = m;
    rec.alpha = alpha;
    rec.lb = lb;
    rec.ub = ub_m;
    rec.best_lb = result.best_lb;
    rec.best_ub = result.best_ub;
    rec.violated_resources = violated;
    rec.pool_size = pool.size();
    rec.route_pool_size = route_arc_pool.size();
    rec.pool = &pool;
    rec.balance_lambda = &bal_lambda;
    rec.lb_solution = &lb_sol;
    rec.ub_solution = ub_ptr;
    if (params.on_iteration) params.on_iteration(rec);
    result.log.push_back(
        {m, alpha, lb, ub_m, result.best_lb, result.best_ub, violated, pool.size()});
    last_relaxed = std::move(lb_sol);

    if (!stop.empty()) {
      result.termination = stop;
      ++m;
      break;
    }
  }
  result.iterations = m;
  if (result.termination.empty()) result.termination = "max_iterations";

  // final repair pass: mandatory for the final-only policy, and a safety net
  // when no feasible plan was produced yet
  if (!have_ub || params.ub_policy == UbPolicy::final_only) {
    std::vector<TrainPlan> last(F);
    for (int32_t f = 0; f < F; ++f) last[f] = {f, true, {}};
    if (!last_relaxed.plans.empty()) last = last_relaxed.plans;
    auto conflicts = conflict_counts(net, last);
    auto order = priority_order(conflicts, derive_seed(params.seed, kSeedOrder, m + 1));
    Solution sol = schedule_sequentially(
        net, order, derive_seed(params.seed, kSeedSched, m + 1), balance_cap);
    sol.method = "lr";
    double ub = objective_total(net, sol.plans);
    if (ub < result.best_ub) {
      result.best_ub = ub;
      best_ub = sol;
      have_ub = true;
    }
  }

  result.solution = std::move(best_ub);
  result.solution.method = "lr";
  result.wall_s = elapsed();
  result.gap = duality_gap(result.best_lb, result.best_ub);
  result.solution.bounds = {result.best_lb, result.best_ub, result.gap,
                            result.iterations, result.wall_s, result.termination};
  (void)nthreads;
  return result;
}

}  // namespace tps
