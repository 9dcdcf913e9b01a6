#pragma once

#include <cmath>

namespace patineq {

/// Neumaier-compensated accumulator. Year cells can hold ~1e5 terms and the
/// oracle tolerances are 1e-12, so plain summation is not enough.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// x*log(x) with the 0*log(0) -> 0 limit.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace patineq
