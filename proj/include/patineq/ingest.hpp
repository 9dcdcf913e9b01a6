#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patineq/delimited.hpp"
#include "patineq/types.hpp"

namespace patineq {

/// Rows of the IPC input file: one (patent, IPC code) use per row.
struct RawIpcRecord {
  std::string pct_nbr;
  int prio_year = 0;
  int app_year = 0;
  std::string ipc_code;  // normalized
};

/// Rows of the application-register file: pct_nbr <-> appln_id links.
struct RawAppRegRecord {
  std::string pct_nbr;
  std::string appln_id;
};

/// Rows of the CPC input file: one (application, CPC code) use per row.
struct RawCpcRecord {
  std::string appln_id;
  std::string cpc_code;  // normalized
};

struct IngestStats {
  std::uint64_t patents = 0;
  PerScheme<std::uint64_t> distinct_codes;
  PerScheme<std::uint64_t> total_uses;
  PerScheme<std::uint64_t> duplicates_collapsed;
  PerScheme<std::uint64_t> excluded_by_window;
  std::uint64_t unmatched_cpc_links = 0;
  std::uint64_t priority_year_conflicts = 0;
  ParseStats ipc_file;
  ParseStats app_reg_file;
  ParseStats cpc_file;
};

Parsed<RawIpcRecord> read_ipc_file(const std::filesystem::path& path,
                                   std::optional<char> delimiter, unsigned threads);
Parsed<RawAppRegRecord> read_app_reg_file(const std::filesystem::path& path,
                                          std::optional<char> delimiter, unsigned threads);
Parsed<RawCpcRecord> read_cpc_file(const std::filesystem::path& path,
                                   std::optional<char> delimiter, unsigned threads);

/// Lookup side of the join plus the IPC events themselves. One priority
/// year per patent: on conflicting prio_year rows the earliest wins and the
/// conflict is counted.
struct IpcSide {
  std::map<std::string, int> priority_year;  // pct_nbr -> year
  std::vector<PatentCodeEvent> events;       // scheme=ipc, deduplicated, sorted
  std::uint64_t duplicates_collapsed = 0;
  std::uint64_t year_conflicts = 0;
};

IpcSide build_ipc_side(std::span<const RawIpcRecord> records);

struct CpcJoinResult {
  std::vector<PatentCodeEvent> events;  // scheme=cpc, deduplicated, sorted
  std::uint64_t unmatched = 0;          // CPC rows with no patent link
  std::uint64_t duplicates_collapsed = 0;
};

/// Attaches each CPC code to the patents its appln_id links to, carrying
/// the patent's priority year. Build the IPC side first; register and CPC
/// streams can arrive in any row order.
CpcJoinResult join_cpc(const std::map<std::string, int>& priority_year_by_patent,
                       std::span<const RawAppRegRecord> app_reg,
                       std::span<const RawCpcRecord> cpc);

/// Keeps events with start <= year <= end (inclusive). Throws
/// std::invalid_argument when start > end.
std::vector<PatentCodeEvent> filter_window(std::vector<PatentCodeEvent> events, int start,
                                           int end, PerScheme<std::uint64_t>* excluded = nullptr);

struct IngestOptions {
  int year_start = 1977;
  int year_end = 2018;
  std::optional<char> delimiter;
  unsigned threads = 1;
  bool want_ipc = true;
  bool want_cpc = true;
};

struct IngestResult {
  std::vector<PatentCodeEvent> events;  // sorted, canonical
  IngestStats stats;
};

/// Full ingest contract: parse, join, normalize, deduplicate, window.
/// cpc/app_reg paths may be empty when want_cpc is false.
IngestResult ingest_files(const std::filesystem::path& ipc_path,
                          const std::filesystem::path& app_reg_path,
                          const std::filesystem::path& cpc_path, const IngestOptions& options);

void write_events(std::ostream& out, std::span<const PatentCodeEvent> events);

}  // namespace patineq
