// Kernel benchmark: serial reference vs OpenMP variants of the two hot
// paths (cost aggregation, per-train block solves).  Also verifies that both
// variants agree bit for bit, which the solver's determinism relies on.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tps/generator.hpp"
#include "tps/lr.hpp"
#include "tps/network.hpp"
#include "tps/train_dp.hpp"

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e30;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int trains = argc > 1 ? std::atoi(argv[1]) : 150;
  int reps = argc > 2 ? std::atoi(argv[2]) : 5;

  tps::LargeStationParams p;
  p.trains = trains;
  p.horizon_s = 28800;
  p.seed = 7;
  tps::Instance inst = tps::generate_large_station(p);
  tps::SpaceTimeNetwork net = tps::build_network(inst);
  std::printf("instance: %s, %zu arcs, %d train-arc slots, %d resources\n",
              inst.name.c_str(), net.arcs().size(), net.total_train_arcs(),
              net.resources().total());
#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled at build time\n");
#endif

  // Populate multipliers by running a few relaxation iterations, so the
  // aggregation kernel runs on a realistic (non-empty) pool.
  tps::MultiplierPool pool(net.resources().total());
  {
    tps::LrParams lp;
    lp.max_iterations = 8;
    lp.ub_policy = tps::UbPolicy::final_only;
    lp.on_iteration = [&](const tps::IterationRecord& rec) { pool = *rec.pool; };
    tps::run(net, lp);
  }
  std::printf("pool after 8 iterations: %zu active multipliers\n", pool.support().size());

  std::vector<double> balance;  // balancing off
  std::vector<double> costs_s, costs_p;
  double t_agg_s = best_of(reps, [&] {
    tps::aggregated_costs_serial(net, pool, balance, costs_s);
  });
  double t_agg_p = best_of(reps, [&] {
    tps::aggregated_costs_parallel(net, pool, balance, costs_p, 0);
  });
  bool agg_equal = costs_s.size() == costs_p.size() &&
                   std::memcmp(costs_s.data(), costs_p.data(),
                               costs_s.size() * sizeof(double)) == 0;
  std::printf("aggregate costs   serial %8.3f ms   parallel %8.3f ms   speedup %.2fx   %s\n",
              t_agg_s, t_agg_p, t_agg_s / t_agg_p, agg_equal ? "bit-equal" : "MISMATCH");

  std::vector<tps::BlockResult> blocks_s, blocks_p;
  double t_dp_s = best_of(reps, [&] {
    tps::solve_blocks_serial(net, costs_s, 42, blocks_s);
  });
  double t_dp_p = best_of(reps, [&] {
    tps::solve_blocks_parallel(net, costs_s, 42, blocks_p, 0);
  });
  bool dp_equal = blocks_s.size() == blocks_p.size();
  for (size_t f = 0; dp_equal && f < blocks_s.size(); ++f)
    dp_equal = blocks_s[f].cancelled == blocks_p[f].cancelled &&
               blocks_s[f].cost == blocks_p[f].cost && blocks_s[f].arcs == blocks_p[f].arcs;
  std::printf("block solves      serial %8.3f ms   parallel %8.3f ms   speedup %.2fx   %s\n",
              t_dp_s, t_dp_p, t_dp_s / t_dp_p, dp_equal ? "bit-equal" : "MISMATCH");

  return agg_equal && dp_equal ? 0 : 1;
}
