#include "patineq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "patineq/numeric.hpp"

namespace patineq {

LorenzCurve LorenzCurve::from_sorted_counts(const std::vector<std::uint64_t>& ascending_counts,
                                            bool collapse_equal) {
  if (ascending_counts.empty()) throw std::invalid_argument("lorenz: empty distribution");
  LorenzCurve curve;
  curve.points_.push_back({0, 0});
  std::uint64_t cum_codes = 0;
  std::uint64_t cum_uses = 0;
  for (std::size_t i = 0; i < ascending_counts.size(); ++i) {
    const std::uint64_t count = ascending_counts[i];
    if (count == 0) throw std::invalid_argument("lorenz: zero use count");
    ++cum_codes;
    cum_uses += count;
    if (collapse_equal && i + 1 < ascending_counts.size() && ascending_counts[i + 1] == count) {
      continue;
    }
    curve.points_.push_back({cum_codes, cum_uses});
  }
  curve.n_ = cum_codes;
  curve.total_ = cum_uses;
  return curve;
}

double LorenzCurve::x(std::size_t i) const {
  return static_cast<double>(points_[i].cum_codes) / static_cast<double>(n_);
}

double LorenzCurve::y(std::size_t i) const {
  return static_cast<double>(points_[i].cum_uses) / static_cast<double>(total_);
}

LorenzCurve lorenz(const FrequencyDistribution& dist) {
  std::vector<std::uint64_t> counts = dist.count_values();
  std::sort(counts.begin(), counts.end());
  return LorenzCurve::from_sorted_counts(counts, /*collapse_equal=*/false);
}

LorenzCurve lorenz(const GroupedFrequencyTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("lorenz: empty distribution");
  std::vector<std::uint64_t> counts;
  counts.reserve(table.code_count());
  std::uint64_t previous = 0;
  for (const GroupedFrequencyTable::Row& row : table.rows) {
    if (row.use_frequency == 0) throw std::invalid_argument("lorenz: zero use count");
    if (row.use_frequency <= previous) {
      throw std::invalid_argument("lorenz: grouped table rows not strictly ascending");
    }
    previous = row.use_frequency;
    counts.insert(counts.end(), row.n_codes, row.use_frequency);
  }
  return LorenzCurve::from_sorted_counts(counts, /*collapse_equal=*/true);
}

double gini(const LorenzCurve& curve) {
  // S = sum (Y_i + Y_{i+1})(X_{i+1} - X_i) scaled by n*total; exact in
  // integers, so G = (D - S) / D with D = n*total stays in [0, 1-1/n].
  unsigned __int128 s = 0;
  const auto& pts = curve.breakpoints();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const unsigned __int128 ysum = static_cast<unsigned __int128>(pts[i].cum_uses) +
                                   pts[i + 1].cum_uses;
    s += ysum * (pts[i + 1].cum_codes - pts[i].cum_codes);
  }
  const unsigned __int128 d =
      static_cast<unsigned __int128>(curve.code_count()) * curve.total_uses();
  return static_cast<double>(d - s) / static_cast<double>(d);
}

namespace {

double theil_sorted(const std::vector<std::uint64_t>& values,
                    const std::vector<std::uint64_t>& multiplicities) {
  std::uint64_t n = 0;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    n += multiplicities[i];
    total += values[i] * multiplicities[i];
  }
  if (n == 0) throw std::invalid_argument("theil: empty distribution");
  const double mu = static_cast<double>(total) / static_cast<double>(n);
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = static_cast<double>(values[i]) / mu;
    sum.add(static_cast<double>(multiplicities[i]) * xlogx(r));
  }
  return sum.value() / static_cast<double>(n);
}

}  // namespace

double theil(const FrequencyDistribution& dist) {
  std::vector<std::uint64_t> counts = dist.count_values();
  if (counts.empty()) throw std::invalid_argument("theil: empty distribution");
  std::sort(counts.begin(), counts.end());
  return theil_sorted(counts, std::vector<std::uint64_t>(counts.size(), 1));
}

double theil(const GroupedFrequencyTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("theil: empty distribution");
  std::vector<std::uint64_t> values;
  std::vector<std::uint64_t> mult;
  values.reserve(table.rows.size());
  mult.reserve(table.rows.size());
  for (const GroupedFrequencyTable::Row& row : table.rows) {
    values.push_back(row.use_frequency);
    mult.push_back(row.n_codes);
  }
  return theil_sorted(values, mult);
}

double theil_counts(std::vector<std::uint64_t> counts) {
  if (counts.empty()) throw std::invalid_argument("theil: empty distribution");
  std::sort(counts.begin(), counts.end());
  return theil_sorted(counts, std::vector<std::uint64_t>(counts.size(), 1));
}

double gini_counts(std::vector<std::uint64_t> counts) {
  std::sort(counts.begin(), counts.end());
  return gini(LorenzCurve::from_sorted_counts(counts, /*collapse_equal=*/true));
}

InequalityResult measure(const FrequencyDistribution& dist) {
  const LorenzCurve curve = lorenz(dist);
  InequalityResult result;
  result.gini = gini(curve);
  result.theil = theil(dist);
  result.n = curve.code_count();
  result.mu = static_cast<double>(curve.total_uses()) / static_cast<double>(curve.code_count());
  return result;
}

InequalityResult measure(const GroupedFrequencyTable& table) {
  const LorenzCurve curve = lorenz(table);
  InequalityResult result;
  result.gini = gini(curve);
  result.theil = theil(table);
  result.n = curve.code_count();
  result.mu = static_cast<double>(curve.total_uses()) / static_cast<double>(curve.code_count());
  return result;
}

}  // namespace patineq
