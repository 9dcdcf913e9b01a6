#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "patineq/concordance.hpp"
#include "patineq/decomposition.hpp"
#include "patineq/frequency.hpp"
#include "patineq/ingest.hpp"
#include "patineq/measures.hpp"

namespace patineq {

struct RunConfig {
  std::filesystem::path ipc_file;
  std::filesystem::path app_reg_file;
  std::filesystem::path cpc_file;
  std::filesystem::path concordance_file;
  int year_start = 1977;
  int year_end = 2018;
  bool scheme_ipc = true;
  bool scheme_cpc = true;
  bool split_dual = true;
  std::vector<int> lorenz_years;
  std::filesystem::path out_dir = "out";
  std::optional<char> delimiter;
  unsigned threads = 1;
  /// false: one combined long-format frequency file; true: one file per
  /// (year, scheme) cell.
  bool freq_per_cell = false;
};

struct Diagnostic {
  enum class Severity { info, warning, error };
  Severity severity = Severity::info;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  bool ok() const;  // no errors
  void info(std::string msg);
  void warning(std::string msg);
  void error(std::string msg);
};

/// Checks paths, file headers, concordance labels and the year window
/// without producing any output.
Diagnostics validate(const RunConfig& config);

struct PipelineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything run() wrote, plus the stats needed for the manifest.
struct RunManifest {
  std::string version;
  std::string status;  // "ok" or "failed"
  std::string error;   // empty when ok
  IngestStats ingest;
  std::map<std::string, std::uint64_t> row_counts;       // per output table
  std::map<std::string, std::string> input_digests;      // path -> fnv1a64
  std::map<std::string, std::string> output_digests;     // filename -> fnv1a64
  std::vector<std::string> notes;
};

std::string manifest_to_json(const RunConfig& config, const RunManifest& manifest);

/// Full pipeline: ingest -> frequencies -> measures -> classification ->
/// decomposition, writing every result table plus manifest.json under
/// config.out_dir. On a fatal stage error, partial outputs are removed, a
/// failed manifest is written and PipelineError is thrown.
RunManifest run(const RunConfig& config);

// Stage runners shared by the CLI subcommands. Each writes its tables into
// config.out_dir and returns the written file names.
std::vector<std::filesystem::path> run_ingest_stage(const RunConfig& config);
std::vector<std::filesystem::path> run_freq_stage(const RunConfig& config);
std::vector<std::filesystem::path> run_ineq_stage(const RunConfig& config);
std::vector<std::filesystem::path> run_lorenz_stage(const RunConfig& config);
std::vector<std::filesystem::path> run_classify_stage(const RunConfig& config);
std::vector<std::filesystem::path> run_decomp_stage(const RunConfig& config);
std::vector<std::filesystem::path> run_rank_stage(const RunConfig& config);

// Table writers (schemas pinned by golden-file tests).
void write_freq_long(std::ostream& out, const std::map<YearScheme, FrequencyDistribution>& dists);
void write_freq_cell(std::ostream& out, const GroupedFrequencyTable& table);
void write_desc_stats(std::ostream& out, const std::map<YearScheme, FrequencyDistribution>& dists);
void write_inequality(std::ostream& out, const std::map<YearScheme, FrequencyDistribution>& dists);
void write_lorenz(std::ostream& out, const std::map<YearScheme, FrequencyDistribution>& dists,
                  const std::vector<int>& years);
void write_classified(std::ostream& out, std::span<const ClassifiedEvent> classified);
void write_division_usage(std::ostream& out, std::span<const ClassifiedEvent> classified);
void write_decomposition_series(std::ostream& out,
                                const std::vector<DecompositionSeriesRow>& rows);
void write_ranking(std::ostream& out, const DivisionRanking& gini_ranking,
                   const DivisionRanking& theil_ranking);
std::string ingest_stats_to_json(const IngestStats& stats);

}  // namespace patineq
