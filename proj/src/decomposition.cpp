#include "patineq/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "patineq/numeric.hpp"
#include "patineq/text.hpp"

namespace patineq {

std::string_view to_string(Measure m) { return m == Measure::gini ? "gini" : "theil"; }

std::optional<Measure> measure_from_string(std::string_view text) {
  if (iequals(text, "gini")) return Measure::gini;
  if (iequals(text, "theil")) return Measure::theil;
  return std::nullopt;
}

DecompositionResult decompose(const PartitionedDistribution& part) {
  if (part.subsets.empty()) throw std::invalid_argument("decompose: empty partition");

  const std::uint64_t n = part.code_count();
  const std::uint64_t total = part.total_uses();
  const double mu = static_cast<double>(total) / static_cast<double>(n);

  DecompositionResult result;
  result.year = part.year;

  CompensatedSum within;
  CompensatedSum between;
  std::vector<std::uint64_t> merged_counts;
  merged_counts.reserve(n);
  for (const auto& [division, dist] : part.subsets) {
    if (dist.counts.empty()) continue;  // empty subsets carry zero weight
    DivisionBreakdown breakdown;
    breakdown.n_codes = dist.code_count();
    const std::uint64_t uses_g = dist.total_uses();
    breakdown.mu = static_cast<double>(uses_g) / static_cast<double>(breakdown.n_codes);
    // share n_g*mu_g/(n*mu) reduces to uses_g/total; exact integer ratio.
    breakdown.share = static_cast<double>(uses_g) / static_cast<double>(total);
    breakdown.theil = theil(dist);
    breakdown.gini = gini(lorenz(dist));
    within.add(breakdown.share * breakdown.theil);
    between.add(breakdown.share * std::log(breakdown.mu / mu));
    for (const auto& [code, count] : dist.counts) merged_counts.push_back(count);
    result.per_division.emplace(division, breakdown);
  }
  result.within = within.value();
  result.between = between.value();
  // Total is the Theil of the merged counts, evaluated independently;
  // the Eq.-identity total == within + between is checked by tests, not
  // assumed here.
  result.total = theil_counts(std::move(merged_counts));
  return result;
}

DivisionRanking rank_divisions(const PartitionedDistribution& part, Measure measure) {
  if (part.subsets.empty()) throw std::invalid_argument("rank_divisions: empty partition");

  const std::uint64_t total = part.total_uses();
  DivisionRanking ranking;
  ranking.year = part.year;
  ranking.measure = measure;

  for (const auto& [division, dist] : part.subsets) {
    if (dist.counts.empty()) continue;
    DivisionRanking::Entry entry;
    entry.division = division;
    entry.n_codes = dist.code_count();
    entry.mu = static_cast<double>(dist.total_uses()) / static_cast<double>(entry.n_codes);
    entry.share = static_cast<double>(dist.total_uses()) / static_cast<double>(total);
    if (entry.n_codes < 2) {
      entry.degenerate = true;
      entry.value = 0.0;
    } else {
      entry.value = measure == Measure::gini ? gini(lorenz(dist)) : theil(dist);
    }
    ranking.entries.push_back(std::move(entry));
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const DivisionRanking::Entry& a, const DivisionRanking::Entry& b) {
              if (a.value != b.value) return a.value > b.value;
              return a.division < b.division;
            });

  // Whole-dataset reference row.
  std::vector<std::uint64_t> merged_counts;
  merged_counts.reserve(part.code_count());
  for (const auto& [division, dist] : part.subsets) {
    for (const auto& [code, count] : dist.counts) merged_counts.push_back(count);
  }
  DivisionRanking::Entry all;
  all.division = "All";
  all.n_codes = merged_counts.size();
  all.mu = static_cast<double>(total) / static_cast<double>(all.n_codes);
  all.share = 1.0;
  all.value = measure == Measure::gini ? gini_counts(merged_counts)
                                       : theil_counts(std::move(merged_counts));
  ranking.entries.push_back(std::move(all));
  return ranking;
}

std::vector<DecompositionSeriesRow> decomposition_series(
    const std::map<int, PartitionedDistribution>& partitions) {
  std::vector<DecompositionSeriesRow> rows;
  rows.reserve(partitions.size());
  for (const auto& [year, part] : partitions) {
    const DecompositionResult d = decompose(part);
    rows.push_back({year, d.total, d.within, d.between});
  }
  return rows;
}

}  // namespace patineq
