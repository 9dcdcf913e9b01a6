#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "patineq/concordance.hpp"
#include "patineq/measures.hpp"

namespace patineq {

enum class Measure { gini, theil };

std::string_view to_string(Measure m);
std::optional<Measure> measure_from_string(std::string_view text);

struct DivisionBreakdown {
  std::uint64_t n_codes = 0;  // n_g
  double mu = 0.0;            // mu_g
  double share = 0.0;         // n_g*mu_g / (n*mu)
  double theil = 0.0;         // T(y^g, n_g)
  double gini = 0.0;
};

/// Within/between split of total Theil inequality across divisions:
///   within  = sum_g share_g * T(y^g)
///   between = sum_g share_g * ln(mu_g / mu)
/// and total = within + between equals the Theil index of the merged
/// distribution. Empty divisions carry zero weight and are omitted.
struct DecompositionResult {
  int year = 0;
  double total = 0.0;
  double within = 0.0;
  double between = 0.0;
  std::map<Division, DivisionBreakdown> per_division;
};

DecompositionResult decompose(const PartitionedDistribution& part);

/// Per-division inequality ranking for one year, descending by value with
/// ties broken by division label. Divisions with fewer than two codes are
/// reported as 0 and flagged degenerate. An "All" reference row with the
/// unpartitioned value is appended after the ranked entries.
struct DivisionRanking {
  struct Entry {
    Division division;  // "All" on the reference row
    double value = 0.0;
    std::uint64_t n_codes = 0;
    double mu = 0.0;
    double share = 0.0;
    bool degenerate = false;
  };

  int year = 0;
  Measure measure = Measure::gini;
  std::vector<Entry> entries;
};

DivisionRanking rank_divisions(const PartitionedDistribution& part, Measure measure);

struct DecompositionSeriesRow {
  int year = 0;
  double total = 0.0;
  double within = 0.0;
  double between = 0.0;
};

/// One decomposition row per year, ascending.
std::vector<DecompositionSeriesRow> decomposition_series(
    const std::map<int, PartitionedDistribution>& partitions);

}  // namespace patineq
