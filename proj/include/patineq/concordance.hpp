#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patineq/frequency.hpp"
#include "patineq/types.hpp"

namespace patineq {

using Division = std::string;

inline constexpr std::string_view kCoIpc = "Co_IPC";

/// The 27 NACE division labels: 10..32, 42, 43, 62 and the Co_IPC residual.
const std::vector<Division>& known_divisions();
bool is_known_division(std::string_view label);

struct ConcordanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// IPC-prefix -> NACE-division map with longest-prefix-match lookup.
/// Prefixes are normalized exactly like ingested codes.
class ConcordanceTable {
 public:
  /// Two-column delimited text (ipc_prefix, nace_division) with a header
  /// row. Unknown division labels, conflicting duplicate prefixes and an
  /// empty table are fatal.
  static ConcordanceTable load(std::istream& in, std::optional<char> delimiter = std::nullopt);
  static ConcordanceTable load_file(const std::filesystem::path& path,
                                    std::optional<char> delimiter = std::nullopt);
  static ConcordanceTable from_entries(
      std::span<const std::pair<std::string, std::string>> entries);

  /// Longest matching prefix's division; Co_IPC when nothing matches.
  Division lookup(std::string_view normalized_code) const;
  std::size_t size() const { return by_prefix_.size(); }

 private:
  std::map<std::string, Division> by_prefix_;
  std::vector<std::size_t> prefix_lengths_;  // distinct, descending
};

/// Context-sensitive dual classification: the trigger subclasses map to
/// NACE 20 (C12M to 32) when the patent also carries an A61K 8/ group
/// code, and to NACE 21 otherwise. Applied per patent, before the table.
struct ConditionalRule {
  std::set<std::string, std::less<>> trigger_subclasses = {"C07B", "C07C", "C07F",
                                                           "C07G", "C12S", "C40B"};
  std::string special_subclass = "C12M";
  Division with_context_trigger = "20";
  Division with_context_special = "32";
  Division without_context = "21";

  bool is_dual_subclass(std::string_view subclass) const {
    return subclass == special_subclass || trigger_subclasses.count(subclass) > 0;
  }
};

/// First four characters when they form an IPC subclass symbol
/// (letter, digit, digit, letter), empty otherwise.
std::string_view ipc_subclass(std::string_view normalized_code);

/// True for members of the A61K 8/ main group; both the padded
/// ("A61K008/02") and spaced ("A61K 8/02") spellings match.
bool in_context_group(std::string_view normalized_code);

struct ClassifiedEvent {
  PatentCodeEvent event;  // scheme == ipc
  Division division;
  bool context_flag = false;  // patent carries an A61K 8/ code
};

/// Classifies the IPC codes of a single patent. Every code receives a
/// division; Co_IPC is the total fallback.
std::vector<ClassifiedEvent> classify(std::span<const PatentCodeEvent> patent_events,
                                      const ConcordanceTable& table, const ConditionalRule& rule);

/// Groups events by patent (any input order) and classifies each patent
/// independently. Result sorted by (patent, code).
std::vector<ClassifiedEvent> classify_all(std::span<const PatentCodeEvent> events,
                                          const ConcordanceTable& table,
                                          const ConditionalRule& rule);

/// A yearly distribution split into disjoint per-division subsets.
struct PartitionedDistribution {
  int year = 0;
  std::map<Division, FrequencyDistribution> subsets;

  std::uint64_t code_count() const;  // n = sum of n_g
  std::uint64_t total_uses() const;
  double mean() const;  // mu
};

/// Splits one year's classified events into per-division distributions.
/// split_dual=true counts a dual-classified symbol as two code identities
/// (with and without context); split_dual=false merges its uses under the
/// majority division of that year, ties going to NACE 21. Counts are
/// conserved exactly in both modes. Throws on mixed years.
PartitionedDistribution partition(std::span<const ClassifiedEvent> classified, int year,
                                  bool split_dual);

std::map<int, PartitionedDistribution> partition_by_year(
    std::span<const ClassifiedEvent> classified, bool split_dual);

/// Total uses per division over all years, Table-2 style.
std::map<Division, std::uint64_t> division_use_totals(
    std::span<const ClassifiedEvent> classified);

/// Percent share rounded to two decimals, the Table-2 percentage column.
double percent_share(std::uint64_t part, std::uint64_t whole);

}  // namespace patineq
