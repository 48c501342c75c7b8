#pragma once
// Independent ground truth: feasibility checking and exact optimization by
// branch and bound over explicitly enumerated candidate paths.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tps/network.hpp"
#include "tps/solution.hpp"

namespace tps {

struct ResourceViolation {
  int32_t resource = -1;
  int32_t occupation = 0;  // total units, capacity is 1
  std::vector<int32_t> trains;
};

struct BalanceViolation {
  int32_t siding_node = -1;
  int32_t arrivals = 0;
  int32_t cap = 0;
  std::vector<int32_t> trains;
};

struct FeasibilityReport {
  std::vector<ResourceViolation> capacity;
  std::vector<BalanceViolation> balance;
  bool feasible() const { return capacity.empty() && balance.empty(); }
};

// Aggregates per-train occupations (duplicates collapsed per variable type)
// and reports every micro resource with total occupation > 1.  The balance
// constraint is checked when the instance enables strict balancing.
FeasibilityReport check_feasibility(const SpaceTimeNetwork& net, const Solution& sol);

class EnumerationCapExceeded : public std::runtime_error {
 public:
  explicit EnumerationCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ExactParams {
  long long node_cap = 10'000'000;  // explored search nodes before refusing
};

struct ExactResult {
  Solution solution;
  double optimum = 0;
  long long nodes_explored = 0;
  long long candidates = 0;  // total candidate paths over all trains
};

// Exact optimum by depth-first branch and bound over per-train candidate
// paths (every arrival arc x dwell x departure arc combination plus the
// virtual path).  Deterministic and invariant to the order trains appear in
// the instance.  Throws EnumerationCapExceeded beyond params.node_cap.
ExactResult solve_exact(const SpaceTimeNetwork& net, const ExactParams& params = {});

}  // namespace tps
