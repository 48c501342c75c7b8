// tps -- train platforming toolkit.
//
//   tps generate  synthesize an instance (compact or large built-in station)
//   tps perturb   apply a delay or outage scenario to an instance
//   tps solve     relaxation / heuristic / exact solve, JSON solution out
//   tps check     validate a solution file against its instance
//   tps gantt     SVG resource-occupation chart of a solution
//   tps report    summarize a solution file
//
// Exit codes: 0 success, 1 usage or I/O error, 2 invalid input or infeasible
// solution, 3 exact enumeration refused (search cap), 4 solver hit the time
// limit without any feasible plan.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "tps/gantt.hpp"
#include "tps/generator.hpp"
#include "tps/instance_io.hpp"
#include "tps/lr.hpp"
#include "tps/oracle.hpp"
#include "tps/solution.hpp"

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t default_seed() {
  if (const char* e = std::getenv("TPS_SEED")) return std::strtoull(e, nullptr, 10);
  return 1;
}

tps::Instance load_checked(const std::string& path) {
  tps::Instance inst = tps::load_instance(path);
  auto violations = tps::validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance " + path + ":";
    for (const auto& v : violations) msg += "\n  " + v.element + ": " + v.message;
    throw ValidationError(msg);
  }
  return inst;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string describe(const tps::SpaceTimeNetwork& net, int32_t resource) {
  const tps::Station& st = net.instance().station;
  tps::MicroResource r = net.resources().decode(resource);
  std::string space = r.kind == tps::ResourceKind::switch_group
                          ? st.switch_groups[r.space].id
                          : st.nodes[r.space].id;
  int mic = net.grid().micro_s;
  return space + " @ [" + std::to_string(r.period * mic) + ", " +
         std::to_string((r.period + 1) * mic) + ")s";
}

void print_solution_summary(const tps::SpaceTimeNetwork& net, const tps::Solution& sol,
                            bool feasible) {
  tps::ObjectiveBreakdown obj = tps::objective_value(net, sol);
  const tps::BoundsSummary& b = sol.bounds;
  int scheduled = static_cast<int>(sol.plans.size()) - obj.cancelled;
  std::printf("instance     %s\n", net.instance().name.c_str());
  std::printf("method       %s\n", sol.method.c_str());
  std::printf("termination  %s after %d iterations, %.2f s\n", b.termination.c_str(),
              b.iterations, b.wall_s);
  std::printf("bounds       lower %s  upper %s  gap %.2f%%\n", fmt(b.lower).c_str(),
              fmt(b.upper).c_str(), 100.0 * b.gap);
  std::printf("objective    %s  (travel %s, shift %s, cancellation %s)\n",
              fmt(obj.total).c_str(), fmt(obj.travel_cost).c_str(),
              fmt(obj.shift_cost).c_str(), fmt(obj.cancellation_cost).c_str());
  std::printf("trains       %d scheduled, %d cancelled; %ld s travel, %ld s shift\n",
              scheduled, obj.cancelled, obj.travel_s, obj.shift_s);
  std::printf("feasible     %s\n", feasible ? "yes" : "NO");
}

// ---- generate ---------------------------------------------------------------

struct GenerateOpts {
  std::string station = "virtual";
  int trains = -1;
  uint64_t seed = default_seed();
  int horizon = -1;
  int macro = 15, micro = 15;
  int sg_clearing = 30, siding_clearing = 30;
  std::string interlocking = "sectional";
  double w_travel = 1.0, w_shift = 1.0;
  double nonstop_share = -1.0;
  double long_dwell_share = -1.0;
  int balance_cap = -1;
  int balance_tolerance = -1;
  bool balance = false;
  std::string output;
};

int run_generate(const GenerateOpts& o) {
  tps::InterlockingMode mode = o.interlocking == "route"
                                   ? tps::InterlockingMode::route_release
                                   : tps::InterlockingMode::sectional_release;
  tps::Instance inst;
  if (o.station == "virtual") {
    tps::VirtualStationParams p;
    if (o.trains >= 0) p.trains = o.trains;
    p.seed = o.seed;
    if (o.horizon > 0) p.horizon_s = o.horizon;
    p.macro_s = o.macro;
    p.micro_s = o.micro;
    p.sg_clearing_s = o.sg_clearing;
    p.siding_clearing_s = o.siding_clearing;
    p.interlocking = mode;
    p.w_travel = o.w_travel;
    p.w_shift = o.w_shift;
    if (o.nonstop_share >= 0) p.nonstop_share = o.nonstop_share;
    inst = tps::generate_virtual_station(p);
  } else if (o.station == "large") {
    tps::LargeStationParams p;
    if (o.trains >= 0) p.trains = o.trains;
    p.seed = o.seed;
    if (o.horizon > 0) p.horizon_s = o.horizon;
    p.macro_s = o.macro;
    p.micro_s = o.micro;
    p.sg_clearing_s = o.sg_clearing;
    p.siding_clearing_s = o.siding_clearing;
    p.interlocking = mode;
    p.w_travel = o.w_travel;
    p.w_shift = o.w_shift;
    if (o.nonstop_share >= 0) p.nonstop_share = o.nonstop_share;
    if (o.long_dwell_share >= 0) p.long_dwell_share = o.long_dwell_share;
    inst = tps::generate_large_station(p);
  } else {
    throw ValidationError("unknown station '" + o.station + "' (virtual|large)");
  }
  if (o.balance || o.balance_tolerance >= 0 || o.balance_cap >= 0) {
    inst.balance.enabled = true;
    inst.balance.cap_base = o.balance_cap;
    inst.balance.tolerance = o.balance_tolerance;
  }
  auto violations = tps::validate_instance(inst);
  if (!violations.empty())
    throw ValidationError("generated instance failed validation: " +
                          violations.front().element + ": " + violations.front().message);
  write_text(o.output, tps::serialize_instance(inst));
  if (!o.output.empty() && o.output != "-")
    std::fprintf(stderr, "wrote %s (%zu trains) to %s\n", inst.name.c_str(),
                 inst.trains.size(), o.output.c_str());
  return 0;
}

// ---- perturb ----------------------------------------------------------------

struct PerturbOpts {
  std::string input;
  std::string scenario;
  int from = 0, to = -1;
  int max_delay = 600;
  std::string node;
  uint64_t seed = default_seed();
  std::string output;
};

int run_perturb(const PerturbOpts& o) {
  tps::Instance inst = load_checked(o.input);
  tps::Instance out;
  if (o.scenario == "delays") {
    tps::DelayScenario sc;
    sc.from_s = o.from;
    sc.to_s = o.to < 0 ? inst.grid.horizon_s : o.to;
    sc.max_delay_s = o.max_delay;
    sc.seed = o.seed;
    out = tps::perturb_delays(inst, sc);
  } else if (o.scenario == "outage") {
    if (o.node.empty()) throw ValidationError("outage scenario requires --node");
    out = tps::perturb_outage(inst, o.node, o.from, o.to);
  } else {
    throw ValidationError("unknown scenario '" + o.scenario + "' (delays|outage)");
  }
  auto violations = tps::validate_instance(out);
  if (!violations.empty())
    throw ValidationError("perturbed instance failed validation: " +
                          violations.front().element + ": " + violations.front().message);
  write_text(o.output, tps::serialize_instance(out));
  return 0;
}

// ---- solve ------------------------------------------------------------------

struct SolveOpts {
  std::string input;
  std::string output;
  std::string method = "lr";
  std::string ub_policy = "iterative";
  std::string update = "pool";
  int max_iters = 1500;
  double time_limit = 0;
  double gap_tol = 0;
  int m_alpha = 20;
  uint64_t seed = default_seed();
  int threads = 0;
  long long node_cap = 10'000'000;
  std::string interlocking;  // optional override
  int balance_tolerance = -2;  // -2: keep instance setting
  std::string log_path;
  bool quiet = false;
  bool json_summary = false;
};

int run_solve(const SolveOpts& o) {
  tps::Instance inst = load_checked(o.input);
  if (!o.interlocking.empty())
    inst.station.interlocking = o.interlocking == "route"
                                    ? tps::InterlockingMode::route_release
                                    : tps::InterlockingMode::sectional_release;
  if (o.balance_tolerance >= -1) {
    inst.balance.enabled = true;
    inst.balance.tolerance = o.balance_tolerance;
  }
  tps::SpaceTimeNetwork net = tps::build_network(inst, o.threads);

  tps::Solution sol;
  tps::LrResult lr_result;
  bool have_log = false;
  if (o.method == "exact") {
    tps::ExactParams p;
    p.node_cap = o.node_cap;
    tps::ExactResult res = tps::solve_exact(net, p);
    sol = std::move(res.solution);
    if (!o.quiet)
      std::fprintf(stderr, "exact search: %lld candidates, %lld nodes\n", res.candidates,
                   res.nodes_explored);
  } else if (o.method == "lr" || o.method == "heuristic") {
    tps::LrParams p;
    p.max_iterations = o.method == "heuristic" ? 1 : o.max_iters;
    p.time_limit_s = o.time_limit;
    p.gap_tol = o.gap_tol;
    p.m_alpha = o.m_alpha;
    p.ub_policy =
        o.ub_policy == "final" ? tps::UbPolicy::final_only : tps::UbPolicy::iterative;
    p.update_mode =
        o.update == "dense" ? tps::UpdateMode::dense : tps::UpdateMode::dynamic_pool;
    p.seed = o.seed;
    p.threads = o.threads;
    lr_result = tps::run(net, p);
    sol = std::move(lr_result.solution);
    if (o.method == "heuristic") sol.method = "heuristic";
    have_log = true;
    if (sol.plans.empty()) {
      std::fprintf(stderr, "no feasible plan within the time limit\n");
      return 4;
    }
  } else {
    throw ValidationError("unknown method '" + o.method + "' (lr|heuristic|exact)");
  }

  bool feasible = tps::check_feasibility(net, sol).feasible();
  if (!o.output.empty()) tps::save_solution(net, sol, o.output);
  if (have_log && !o.log_path.empty()) {
    std::ofstream log(o.log_path);
    if (!log) throw std::runtime_error("cannot write " + o.log_path);
    tps::write_iteration_csv(lr_result, log);
  }
  if (o.json_summary) {
    tps::ObjectiveBreakdown obj = tps::objective_value(net, sol);
    nlohmann::json j{{"instance", inst.name},
                     {"method", sol.method},
                     {"feasible", feasible},
                     {"objective", obj.total},
                     {"lower", sol.bounds.lower},
                     {"upper", sol.bounds.upper},
                     {"gap", sol.bounds.gap},
                     {"iterations", sol.bounds.iterations},
                     {"wall_seconds", sol.bounds.wall_s},
                     {"termination", sol.bounds.termination},
                     {"cancelled", obj.cancelled}};
    std::cout << j.dump() << "\n";
  } else if (!o.quiet) {
    print_solution_summary(net, sol, feasible);
  }
  return feasible ? 0 : 2;
}

// ---- check ------------------------------------------------------------------

int run_check(const std::string& instance_path, const std::string& solution_path) {
  tps::Instance inst = load_checked(instance_path);
  tps::SpaceTimeNetwork net = tps::build_network(inst);
  tps::Solution sol = tps::load_solution(net, solution_path);
  tps::ObjectiveBreakdown obj = tps::objective_value(net, sol);  // validates structure
  tps::FeasibilityReport rep = tps::check_feasibility(net, sol);
  std::printf("objective %s (travel %s, shift %s, cancellation %s), %d cancelled\n",
              fmt(obj.total).c_str(), fmt(obj.travel_cost).c_str(),
              fmt(obj.shift_cost).c_str(), fmt(obj.cancellation_cost).c_str(),
              obj.cancelled);
  if (rep.feasible()) {
    std::printf("solution is feasible\n");
    return 0;
  }
  for (const auto& v : rep.capacity) {
    std::string trains;
    for (int32_t f : v.trains) trains += " " + inst.trains[f].id;
    std::printf("capacity violation: %s occupied %d times by%s\n",
                describe(net, v.resource).c_str(), v.occupation, trains.c_str());
  }
  for (const auto& v : rep.balance) {
    std::string trains;
    for (int32_t f : v.trains) trains += " " + inst.trains[f].id;
    std::printf("balance violation: siding %s receives %d arrivals (cap %d):%s\n",
                inst.station.nodes[v.siding_node].id.c_str(), v.arrivals, v.cap,
                trains.c_str());
  }
  return 2;
}

// ---- gantt / report ---------------------------------------------------------

int run_gantt(const std::string& instance_path, const std::string& solution_path,
              const std::string& output) {
  tps::Instance inst = load_checked(instance_path);
  tps::SpaceTimeNetwork net = tps::build_network(inst);
  tps::Solution sol = tps::load_solution(net, solution_path);
  std::ostringstream svg;
  tps::emit_gantt(svg, net, sol);
  write_text(output, svg.str());
  return 0;
}

int run_report(const std::string& solution_path) {
  std::ifstream in(solution_path);
  if (!in) throw std::runtime_error("cannot open solution file " + solution_path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::printf("instance     %s\n", j.value("instance", std::string("?")).c_str());
  std::printf("method       %s\n", j.value("method", std::string("?")).c_str());
  std::printf("feasible     %s\n", j.value("feasible", false) ? "yes" : "NO");
  if (j.contains("objective")) {
    const auto& o = j["objective"];
    std::printf("objective    %s  (travel %s, shift %s, cancellation %s)\n",
                fmt(o.value("total", 0.0)).c_str(), fmt(o.value("travel_cost", 0.0)).c_str(),
                fmt(o.value("shift_cost", 0.0)).c_str(),
                fmt(o.value("cancellation_cost", 0.0)).c_str());
  }
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    std::printf("bounds       lower %s  upper %s  gap %.2f%%  (%s, %d iterations, %.2f s)\n",
                fmt(b.value("lower", 0.0)).c_str(), fmt(b.value("upper", 0.0)).c_str(),
                100.0 * b.value("gap", 0.0), b.value("termination", std::string("?")).c_str(),
                b.value("iterations", 0), b.value("wall_seconds", 0.0));
  }
  if (j.contains("trains")) {
    int scheduled = 0, cancelled = 0;
    for (const auto& t : j["trains"])
      (t.value("status", std::string()) == "cancelled" ? cancelled : scheduled)++;
    std::printf("trains       %d scheduled, %d cancelled\n", scheduled, cancelled);
    std::printf("%-8s %-10s %-9s %-9s %7s %7s\n", "train", "platform", "arrival",
                "departure", "a-shift", "d-shift");
    for (const auto& t : j["trains"]) {
      if (t.value("status", std::string()) == "cancelled") {
        std::printf("%-8s cancelled\n", t.value("id", std::string("?")).c_str());
        continue;
      }
      std::printf("%-8s %-10s %9d %9d %7d %7d\n", t.value("id", std::string("?")).c_str(),
                  t.value("platform", std::string("?")).c_str(), t.value("arrival", 0),
                  t.value("departure", 0), t.value("arrival_shift", 0),
                  t.value("departure_shift", 0));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level train platforming solver"};
  app.require_subcommand(1);

  GenerateOpts gen;
  CLI::App* cgen = app.add_subcommand("generate", "synthesize an instance");
  cgen->add_option("--station", gen.station, "built-in station: virtual|large");
  cgen->add_option("-n,--trains", gen.trains, "number of trains");
  cgen->add_option("--seed", gen.seed, "random seed (default: $TPS_SEED or 1)");
  cgen->add_option("--horizon", gen.horizon, "planning horizon in seconds");
  cgen->add_option("--macro", gen.macro, "macroscopic period length (s)");
  cgen->add_option("--micro", gen.micro, "microscopic period length (s)");
  cgen->add_option("--sg-clearing", gen.sg_clearing, "switch-group clearing time (s)");
  cgen->add_option("--siding-clearing", gen.siding_clearing, "siding clearing time (s)");
  cgen->add_option("--interlocking", gen.interlocking, "sectional|route");
  cgen->add_option("--w-travel", gen.w_travel, "travel-time weight");
  cgen->add_option("--w-shift", gen.w_shift, "shift weight");
  cgen->add_option("--nonstop-share", gen.nonstop_share, "fraction of nonstop trains");
  cgen->add_option("--long-dwell-share", gen.long_dwell_share,
                   "fraction of long stops (large station)");
  cgen->add_flag("--balance", gen.balance, "enable platform-usage balancing");
  cgen->add_option("--balance-cap", gen.balance_cap,
                   "arrivals cap base per siding (default: derived)");
  cgen->add_option("--balance-tolerance", gen.balance_tolerance,
                   "hard cap = base + tolerance; < 0 is soft");
  cgen->add_option("-o,--output", gen.output, "output path (default: stdout)");

  PerturbOpts per;
  CLI::App* cper = app.add_subcommand("perturb", "apply a disturbance scenario");
  cper->add_option("-i,--input", per.input, "instance file")->required();
  cper->add_option("--scenario", per.scenario, "delays|outage")->required();
  cper->add_option("--from", per.from, "window start (s)");
  cper->add_option("--to", per.to, "window end (s, default: horizon)");
  cper->add_option("--max-delay", per.max_delay, "max delay (s, delays scenario)");
  cper->add_option("--node", per.node, "platform node id (outage scenario)");
  cper->add_option("--seed", per.seed, "random seed");
  cper->add_option("-o,--output", per.output, "output path (default: stdout)");

  SolveOpts sv;
  CLI::App* csv = app.add_subcommand("solve", "solve an instance");
  csv->add_option("-i,--input", sv.input, "instance file")->required();
  csv->add_option("-o,--output", sv.output, "solution file");
  csv->add_option("--method", sv.method, "lr|heuristic|exact");
  csv->add_option("--ub-policy", sv.ub_policy, "iterative|final");
  csv->add_option("--update", sv.update, "multiplier update: pool|dense");
  csv->add_option("--max-iters", sv.max_iters, "iteration limit");
  csv->add_option("--time-limit", sv.time_limit, "wall-time limit (s)");
  csv->add_option("--gap-tol", sv.gap_tol, "relative gap target");
  csv->add_option("--m-alpha", sv.m_alpha, "step-size freeze iteration");
  csv->add_option("--seed", sv.seed, "random seed (default: $TPS_SEED or 1)");
  csv->add_option("--threads", sv.threads, "worker threads (0: default, 1: serial)");
  csv->add_option("--node-cap", sv.node_cap, "exact search node cap");
  csv->add_option("--interlocking", sv.interlocking, "override: sectional|route");
  csv->add_option("--balance-tolerance", sv.balance_tolerance,
                  "override balance tolerance (enables balancing)");
  csv->add_option("--log", sv.log_path, "iteration log CSV path");
  csv->add_flag("--quiet", sv.quiet, "suppress the summary");
  csv->add_flag("--json", sv.json_summary, "print a JSON summary line");

  std::string chk_inst, chk_sol;
  CLI::App* cchk = app.add_subcommand("check", "validate a solution file");
  cchk->add_option("-i,--instance", chk_inst, "instance file")->required();
  cchk->add_option("-s,--solution", chk_sol, "solution file")->required();

  std::string g_inst, g_sol, g_out;
  CLI::App* cg = app.add_subcommand("gantt", "render a resource-occupation SVG");
  cg->add_option("-i,--instance", g_inst, "instance file")->required();
  cg->add_option("-s,--solution", g_sol, "solution file")->required();
  cg->add_option("-o,--output", g_out, "SVG path (default: stdout)");

  std::string r_sol;
  CLI::App* crep = app.add_subcommand("report", "summarize a solution file");
  crep->add_option("-s,--solution", r_sol, "solution file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cgen->parsed()) return run_generate(gen);
    if (cper->parsed()) return run_perturb(per);
    if (csv->parsed()) return run_solve(sv);
    if (cchk->parsed()) return run_check(chk_inst, chk_sol);
    if (cg->parsed()) return run_gantt(g_inst, g_sol, g_out);
    if (crep->parsed()) return run_report(r_sol);
  } catch (const tps::EnumerationCapExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    std::string what = e.what();
    return what.rfind("invalid instance", 0) == 0 || what.rfind("train ", 0) == 0 ||
                   what.rfind("plan ", 0) == 0 || what.rfind("solution ", 0) == 0
               ? 2
               : 1;
  }
  return 1;
}
