#include "strata/schedule.hpp"

#include <string>

namespace strata {

StepSchedule StepSchedule::constant(double gamma) {
  if (!(gamma > 0)) throw ConfigError("constant schedule requires gamma > 0");
  StepSchedule s;
  s.kind = Kind::Constant;
  s.gamma = gamma;
  return s;
}

StepSchedule StepSchedule::inverse_k(double c) {
  if (!(c > 0)) throw ConfigError("1/k schedule requires c > 0");
  StepSchedule s;
  s.kind = Kind::InverseK;
  s.c = c;
  return s;
}

StepSchedule StepSchedule::explicit_list(std::vector<double> values) {
  if (values.empty()) throw ConfigError("explicit schedule requires at least one step");
  for (double v : values) {
    if (!(v > 0)) throw ConfigError("explicit schedule steps must be positive");
  }
  StepSchedule s;
  s.kind = Kind::Explicit;
  s.values = std::move(values);
  return s;
}

double StepSchedule::gamma_at(int64_t k) const {
  if (k < 1) throw Error("schedule index must be >= 1");
  switch (kind) {
    case Kind::Constant:
      return gamma;
    case Kind::InverseK:
      return c / static_cast<double>(k);
    case Kind::Explicit:
      if (k > static_cast<int64_t>(values.size())) {
        throw Error("explicit schedule exhausted at k = " + std::to_string(k));
      }
      return values[static_cast<size_t>(k - 1)];
  }
  return 0.0;
}

bool StepSchedule::is_decreasing(int64_t K) const {
  for (int64_t k = 1; k < K; ++k) {
    if (gamma_at(k + 1) > gamma_at(k)) return false;
  }
  return true;
}

std::vector<IndexInterval> doubling_intervals(const StepSchedule& schedule, int64_t k1,
                                              int64_t K) {
  if (k1 < 1 || k1 > K) throw ConfigError("doubling decomposition requires 1 <= k1 <= K");
  if (!schedule.is_decreasing(K)) {
    throw ConfigError("doubling decomposition requires a decreasing schedule");
  }
  std::vector<IndexInterval> out;
  int64_t start = k1;
  while (start <= K) {
    const double open = schedule.gamma_at(start);
    int64_t next = start + 1;
    while (next <= K && schedule.gamma_at(next) > open / 2.0) ++next;
    // `next` is the first index whose step dropped to half, or K+1.
    out.push_back(IndexInterval{start, next - 1});
    start = next;
  }
  return out;
}

}  // namespace strata
