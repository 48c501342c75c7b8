#include "tps/multiplier_pool.hpp"

#include <algorithm>

namespace tps {

void MultiplierPool::set(int32_t r, double v) {
  double old = lam_[r];
  if (old == v) return;
  lam_[r] = v;
  bool was = old > 0, is = v > 0;
  if (was == is) return;
  auto it = std::lower_bound(support_.begin(), support_.end(), r);
  if (is)
    support_.insert(it, r);
  else
    support_.erase(it);
}

double MultiplierPool::total() const {
  double sum = 0;
  for (int32_t r : support_) sum += lam_[r];
  return sum;
}

}  // namespace tps
