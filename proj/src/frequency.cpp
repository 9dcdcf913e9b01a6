#include "patineq/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "patineq/numeric.hpp"

namespace patineq {

std::uint64_t FrequencyDistribution::total_uses() const {
  std::uint64_t total = 0;
  for (const auto& [code, count] : counts) total += count;
  return total;
}

std::vector<std::uint64_t> FrequencyDistribution::count_values() const {
  std::vector<std::uint64_t> values;
  values.reserve(counts.size());
  for (const auto& [code, count] : counts) values.push_back(count);
  return values;
}

std::uint64_t GroupedFrequencyTable::code_count() const {
  std::uint64_t n = 0;
  for (const Row& row : rows) n += row.n_codes;
  return n;
}

std::uint64_t GroupedFrequencyTable::total_uses() const {
  std::uint64_t total = 0;
  for (const Row& row : rows) total += row.use_frequency * row.n_codes;
  return total;
}

std::map<YearScheme, FrequencyDistribution> build_distributions(
    std::span<const PatentCodeEvent> events) {
  std::map<YearScheme, FrequencyDistribution> dists;
  for (const PatentCodeEvent& e : events) {
    FrequencyDistribution& dist = dists[{e.year, e.scheme}];
    if (dist.counts.empty()) {
      dist.year = e.year;
      dist.scheme = e.scheme;
    }
    ++dist.counts[e.code];
  }
  return dists;
}

GroupedFrequencyTable group_table(const FrequencyDistribution& dist) {
  std::map<std::uint64_t, std::uint64_t> codes_by_count;
  for (const auto& [code, count] : dist.counts) ++codes_by_count[count];
  GroupedFrequencyTable table;
  table.rows.reserve(codes_by_count.size());
  for (const auto& [count, n_codes] : codes_by_count) table.rows.push_back({count, n_codes});
  return table;
}

FrequencyDistribution expand_table(const GroupedFrequencyTable& table, int year, Scheme scheme) {
  FrequencyDistribution dist;
  dist.year = year;
  dist.scheme = scheme;
  std::uint64_t serial = 0;
  char name[24];
  for (const GroupedFrequencyTable::Row& row : table.rows) {
    for (std::uint64_t i = 0; i < row.n_codes; ++i) {
      std::snprintf(name, sizeof(name), "c%08llu", static_cast<unsigned long long>(serial++));
      dist.counts.emplace(name, row.use_frequency);
    }
  }
  return dist;
}

namespace {

DescriptiveStats describe_counts(const std::vector<std::uint64_t>& values,
                                 const std::vector<std::uint64_t>& multiplicities) {
  if (values.empty()) throw std::invalid_argument("describe: empty distribution");
  std::uint64_t n = 0;
  std::uint64_t total = 0;
  std::uint64_t max = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    n += multiplicities[i];
    total += values[i] * multiplicities[i];
    max = std::max(max, values[i]);
  }
  const double mean = static_cast<double>(total) / static_cast<double>(n);

  CompensatedSum m2, m3, m4;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = static_cast<double>(values[i]) - mean;
    const double w = static_cast<double>(multiplicities[i]);
    m2.add(w * d * d);
    m3.add(w * d * d * d);
    m4.add(w * d * d * d * d);
  }
  const double nn = static_cast<double>(n);
  DescriptiveStats stats;
  stats.mean = mean;
  stats.max = static_cast<double>(max);
  stats.variance = m2.value() / nn;
  stats.cv = std::sqrt(stats.variance) / mean;
  if (stats.variance > 0.0) {
    const double v2 = m2.value() / nn;
    stats.skewness = (m3.value() / nn) / std::pow(v2, 1.5);
    stats.kurtosis = (m4.value() / nn) / (v2 * v2);
  }
  return stats;
}

}  // namespace

DescriptiveStats describe(const FrequencyDistribution& dist) {
  std::vector<std::uint64_t> values = dist.count_values();
  std::sort(values.begin(), values.end());
  return describe_counts(values, std::vector<std::uint64_t>(values.size(), 1));
}

DescriptiveStats describe(const GroupedFrequencyTable& table) {
  std::vector<std::uint64_t> values;
  std::vector<std::uint64_t> mult;
  values.reserve(table.rows.size());
  mult.reserve(table.rows.size());
  for (const GroupedFrequencyTable::Row& row : table.rows) {
    values.push_back(row.use_frequency);
    mult.push_back(row.n_codes);
  }
  return describe_counts(values, mult);
}

}  // namespace patineq
