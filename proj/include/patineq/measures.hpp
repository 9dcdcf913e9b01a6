#pragma once

#include <cstdint>
#include <vector>

#include "patineq/frequency.hpp"

namespace patineq {

/// Piecewise-linear Lorenz curve. Breakpoints are kept as exact integer
/// cumulants (codes seen, uses covered) in ascending-count order; the
/// (X, Y) proportions in [0,1] are derived views. First point is (0,0),
/// last is (n, total).
class LorenzCurve {
 public:
  struct Breakpoint {
    std::uint64_t cum_codes;
    std::uint64_t cum_uses;
  };

  /// `ascending_counts` must be sorted; one breakpoint is emitted per entry
  /// and collapse_equal merges runs of equal counts (grouped form).
  static LorenzCurve from_sorted_counts(const std::vector<std::uint64_t>& ascending_counts,
                                        bool collapse_equal);

  std::size_t size() const { return points_.size(); }
  std::size_t segments() const { return points_.size() - 1; }  // k
  std::uint64_t code_count() const { return n_; }
  std::uint64_t total_uses() const { return total_; }
  const std::vector<Breakpoint>& breakpoints() const { return points_; }

  double x(std::size_t i) const;  // cumulative proportion of codes
  double y(std::size_t i) const;  // cumulative proportion of use frequency

 private:
  std::vector<Breakpoint> points_;
  std::uint64_t n_ = 0;
  std::uint64_t total_ = 0;
};

/// One breakpoint per code. Throws std::invalid_argument on empty input or
/// a zero count.
LorenzCurve lorenz(const FrequencyDistribution& dist);
/// One breakpoint per distinct count value; the identical polyline.
LorenzCurve lorenz(const GroupedFrequencyTable& table);

/// Brown trapezoid formula, G = 1 - sum (Y_{i+1}+Y_i)(X_{i+1}-X_i),
/// evaluated on the integer cumulants so equal counts give exactly 0 and
/// the result never goes negative. No small-sample correction.
double gini(const LorenzCurve& curve);

/// T = (1/n) sum (y_i/mu) ln(y_i/mu), natural logarithm, accumulated in
/// ascending-count order with compensated summation. A zero count
/// contributes the 0*ln(0) -> 0 limit (unreachable through ingest, which
/// only produces counts >= 1). Throws std::invalid_argument when empty.
double theil(const FrequencyDistribution& dist);
/// Grouped evaluation T = (1/n) sum n_i (x_i/mu) ln(x_i/mu); equals the
/// ungrouped form within floating tolerance.
double theil(const GroupedFrequencyTable& table);
/// Same index over a bare count multiset, any order.
double theil_counts(std::vector<std::uint64_t> counts);
/// Brown-formula Gini over a bare count multiset, any order.
double gini_counts(std::vector<std::uint64_t> counts);

struct InequalityResult {
  double gini = 0.0;
  double theil = 0.0;
  std::uint64_t n = 0;
  double mu = 0.0;
};

InequalityResult measure(const FrequencyDistribution& dist);
InequalityResult measure(const GroupedFrequencyTable& table);

}  // namespace patineq
