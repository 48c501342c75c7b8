#pragma once
// Lagrangian multipliers over micro resources.
//
// Semantically a sparse map resource -> lambda >= 0 where absent keys mean 0;
// backed by a dense value array plus a sorted support list so lookups are
// O(1) and iteration order is deterministic.

#include <cstdint>
#include <vector>

namespace tps {

class MultiplierPool {
 public:
  MultiplierPool() = default;
  explicit MultiplierPool(int32_t n_resources) : lam_(n_resources, 0.0) {}

  double get(int32_t r) const { return lam_[r]; }
  // Sets lambda_r; keeps only strictly positive values in the support.
  void set(int32_t r, double v);

  const std::vector<int32_t>& support() const { return support_; }
  size_t size() const { return support_.size(); }
  int32_t capacity() const { return static_cast<int32_t>(lam_.size()); }
  const std::vector<double>& dense() const { return lam_; }
  double total() const;  // sum of all multipliers

  bool operator==(const MultiplierPool& o) const {
    return lam_ == o.lam_ && support_ == o.support_;
  }

 private:
  std::vector<double> lam_;
  std::vector<int32_t> support_;  // sorted resource ids with lam > 0
};

}  // namespace tps
