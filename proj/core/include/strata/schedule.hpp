#pragma once

#include <cstdint>
#include <vector>

#include "strata/errors.hpp"

namespace strata {

// Closed interval of 1-based iteration indices [lo, hi].
struct IndexInterval {
  int64_t lo = 1;
  int64_t hi = 0;
  bool empty() const { return lo > hi; }
  int64_t length() const { return empty() ? 0 : hi - lo + 1; }
};

// Step-size schedule: constant gamma, gamma_k = c/k, or an explicit list.
struct StepSchedule {
  enum class Kind { Constant, InverseK, Explicit };

  Kind kind = Kind::Constant;
  double gamma = 0.0;               // Constant
  double c = 0.0;                   // InverseK
  std::vector<double> values;       // Explicit, values[k-1] = gamma_k

  static StepSchedule constant(double gamma);
  static StepSchedule inverse_k(double c);
  static StepSchedule explicit_list(std::vector<double> values);

  double gamma_at(int64_t k) const;  // 1-based
  bool is_decreasing(int64_t K) const;  // non-increasing over [1, K]
};

// Doubling decomposition of [k1, K]: within each interval the step sizes
// differ by at most a factor of two; a new interval starts at the first index
// whose step drops to half the interval-opening step. Throws ConfigError for
// schedules that increase on [k1, K].
std::vector<IndexInterval> doubling_intervals(const StepSchedule& schedule,
                                              int64_t k1, int64_t K);

}  // namespace strata
