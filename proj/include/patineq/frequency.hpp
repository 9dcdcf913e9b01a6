#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patineq/types.hpp"

namespace patineq {

/// Use-frequency vector of one (year, scheme) cell: code -> number of
/// patents that used it that year. Counts are always >= 1.
struct FrequencyDistribution {
  int year = 0;
  Scheme scheme = Scheme::ipc;
  std::map<std::string, std::uint64_t> counts;

  std::uint64_t code_count() const { return counts.size(); }
  std::uint64_t total_uses() const;
  /// The raw count multiset, unsorted.
  std::vector<std::uint64_t> count_values() const;
};

/// Frequency-of-frequencies view: how many codes were used exactly
/// `use_frequency` times. Rows ascending by use_frequency.
struct GroupedFrequencyTable {
  struct Row {
    std::uint64_t use_frequency;  // x_i
    std::uint64_t n_codes;        // n_i
  };
  std::vector<Row> rows;

  std::uint64_t code_count() const;
  std::uint64_t total_uses() const;
};

struct DescriptiveStats {
  double mean = 0.0;
  double max = 0.0;
  double variance = 0.0;
  double cv = 0.0;
  // Empty when variance is zero; the ratios are undefined there.
  std::optional<double> skewness;
  std::optional<double> kurtosis;
};

using YearScheme = std::pair<int, Scheme>;

/// One pass over the event stream; every event lands in exactly one
/// (year, scheme) cell. Event order never changes the result.
std::map<YearScheme, FrequencyDistribution> build_distributions(
    std::span<const PatentCodeEvent> events);

GroupedFrequencyTable group_table(const FrequencyDistribution& dist);

/// Rebuilds a distribution from a grouped table with synthetic code names.
/// All downstream measures depend only on the count multiset, so this is a
/// faithful inverse for them.
FrequencyDistribution expand_table(const GroupedFrequencyTable& table, int year = 0,
                                   Scheme scheme = Scheme::ipc);

/// Population moments (divide by n, not n-1). Kurtosis is non-excess
/// (normal = 3). Throws std::invalid_argument on an empty distribution.
DescriptiveStats describe(const FrequencyDistribution& dist);
DescriptiveStats describe(const GroupedFrequencyTable& table);

}  // namespace patineq
