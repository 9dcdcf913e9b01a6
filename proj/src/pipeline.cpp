#include "patineq/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "patineq/text.hpp"

namespace patineq {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PipelineError("cannot write output file: " + path.string());
  return out;
}

std::string scheme_list(const RunConfig& config) {
  std::string s;
  if (config.scheme_ipc) s += "ipc";
  if (config.scheme_cpc) s += s.empty() ? "cpc" : ",cpc";
  return s;
}

IngestOptions ingest_options(const RunConfig& config) {
  IngestOptions opt;
  opt.year_start = config.year_start;
  opt.year_end = config.year_end;
  opt.delimiter = config.delimiter;
  opt.threads = config.threads == 0 ? 1 : config.threads;
  opt.want_ipc = config.scheme_ipc;
  opt.want_cpc = config.scheme_cpc;
  return opt;
}

IngestResult ingest_for(const RunConfig& config) {
  return ingest_files(config.ipc_file, config.app_reg_file, config.cpc_file,
                      ingest_options(config));
}

std::vector<ClassifiedEvent> classify_for(const RunConfig& config,
                                          std::span<const PatentCodeEvent> events) {
  const ConcordanceTable table = ConcordanceTable::load_file(config.concordance_file,
                                                             config.delimiter);
  return classify_all(events, table, ConditionalRule{});
}

std::string freq_cell_name(const FrequencyDistribution& dist) {
  std::string name = "freq_" + std::to_string(dist.year) + "_";
  name += dist.scheme == Scheme::ipc ? "ipc" : "cpc";
  return name + ".tsv";
}

std::vector<std::filesystem::path> write_freq_outputs(
    const RunConfig& config, const std::map<YearScheme, FrequencyDistribution>& dists) {
  std::vector<std::filesystem::path> written;
  if (config.freq_per_cell) {
    for (const auto& [key, dist] : dists) {
      const std::filesystem::path path = config.out_dir / freq_cell_name(dist);
      std::ofstream out = open_out(path);
      write_freq_cell(out, group_table(dist));
      written.push_back(path);
    }
  } else {
    const std::filesystem::path path = config.out_dir / "freq_long.tsv";
    std::ofstream out = open_out(path);
    write_freq_long(out, dists);
    written.push_back(path);
  }
  return written;
}

void check_header(Diagnostics& diag, const std::filesystem::path& path,
                  std::span<const std::string_view> columns, std::optional<char> delimiter,
                  std::string_view label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    diag.error(std::string(label) + " file not readable: " + path.string());
    return;
  }
  std::string header;
  std::getline(in, header);
  try {
    const char delim = delimiter ? *delimiter : sniff_delimiter(strip_cr(header));
    HeaderIndex index(strip_cr(header), columns, delim);
    (void)index;
  } catch (const SchemaError& e) {
    diag.error(std::string(label) + ": " + e.what());
  }
}

}  // namespace

bool Diagnostics::ok() const {
  return std::none_of(items.begin(), items.end(), [](const Diagnostic& d) {
    return d.severity == Diagnostic::Severity::error;
  });
}

void Diagnostics::info(std::string msg) {
  items.push_back({Diagnostic::Severity::info, std::move(msg)});
}
void Diagnostics::warning(std::string msg) {
  items.push_back({Diagnostic::Severity::warning, std::move(msg)});
}
void Diagnostics::error(std::string msg) {
  items.push_back({Diagnostic::Severity::error, std::move(msg)});
}

Diagnostics validate(const RunConfig& config) {
  Diagnostics diag;
  if (config.year_start > config.year_end) {
    diag.error("year window start " + std::to_string(config.year_start) + " is after end " +
               std::to_string(config.year_end));
  }
  if (!config.scheme_ipc && !config.scheme_cpc) diag.error("no scheme selected");

  static constexpr std::string_view ipc_columns[] = {"pct_nbr", "prio_year", "app_year", "IPC"};
  static constexpr std::string_view reg_columns[] = {"pct_nbr", "appln_id"};
  static constexpr std::string_view cpc_columns[] = {"appln_id", "CPC"};

  if (config.ipc_file.empty()) {
    diag.error("IPC file path required (priority years come from it)");
  } else {
    check_header(diag, config.ipc_file, ipc_columns, config.delimiter, "IPC file");
  }
  if (config.scheme_cpc) {
    if (config.app_reg_file.empty()) {
      diag.error("app-register file path required when the CPC scheme is selected");
    } else {
      check_header(diag, config.app_reg_file, reg_columns, config.delimiter, "app-register file");
    }
    if (config.cpc_file.empty()) {
      diag.error("CPC file path required when the CPC scheme is selected");
    } else {
      check_header(diag, config.cpc_file, cpc_columns, config.delimiter, "CPC file");
    }
  }
  if (config.concordance_file.empty()) {
    diag.error("concordance file path required for the NACE stages");
  } else {
    try {
      const ConcordanceTable table = ConcordanceTable::load_file(config.concordance_file,
                                                                 config.delimiter);
      diag.info("concordance: " + std::to_string(table.size()) + " prefixes");
    } catch (const std::exception& e) {
      diag.error(e.what());
    }
  }
  for (int year : config.lorenz_years) {
    if (year < config.year_start || year > config.year_end) {
      diag.warning("lorenz year " + std::to_string(year) + " outside the configured window");
    }
  }
  if (diag.ok()) diag.info("ok");
  return diag;
}

void write_freq_long(std::ostream& out,
                     const std::map<YearScheme, FrequencyDistribution>& dists) {
  out << "year\tscheme\tuse_frequency\tn_codes\n";
  for (const auto& [key, dist] : dists) {
    const GroupedFrequencyTable table = group_table(dist);
    for (const GroupedFrequencyTable::Row& row : table.rows) {
      out << dist.year << '\t' << to_string(dist.scheme) << '\t' << row.use_frequency << '\t'
          << row.n_codes << '\n';
    }
  }
}

void write_freq_cell(std::ostream& out, const GroupedFrequencyTable& table) {
  out << "use_frequency\tn_codes\n";
  for (const GroupedFrequencyTable::Row& row : table.rows) {
    out << row.use_frequency << '\t' << row.n_codes << '\n';
  }
}

void write_desc_stats(std::ostream& out,
                      const std::map<YearScheme, FrequencyDistribution>& dists) {
  out << "year\tscheme\tn\tmean\tmax\tvariance\tcv\tskewness\tkurtosis\n";
  for (const auto& [key, dist] : dists) {
    const DescriptiveStats stats = describe(dist);
    out << dist.year << '\t' << to_string(dist.scheme) << '\t' << dist.code_count() << '\t'
        << format_double(stats.mean) << '\t' << format_double(stats.max) << '\t'
        << format_double(stats.variance) << '\t' << format_double(stats.cv) << '\t'
        << (stats.skewness ? format_double(*stats.skewness) : "NA") << '\t'
        << (stats.kurtosis ? format_double(*stats.kurtosis) : "NA") << '\n';
  }
}

void write_inequality(std::ostream& out,
                      const std::map<YearScheme, FrequencyDistribution>& dists) {
  out << "year\tscheme\tn\tmu\tgini\ttheil\n";
  for (const auto& [key, dist] : dists) {
    const InequalityResult result = measure(dist);
    out << dist.year << '\t' << to_string(dist.scheme) << '\t' << result.n << '\t'
        << format_double(result.mu) << '\t' << format_double(result.gini) << '\t'
        << format_double(result.theil) << '\n';
  }
}

void write_lorenz(std::ostream& out, const std::map<YearScheme, FrequencyDistribution>& dists,
                  const std::vector<int>& years) {
  out << "year\tscheme\tX\tY\n";
  std::set<int> wanted(years.begin(), years.end());
  for (const auto& [key, dist] : dists) {
    if (wanted.count(dist.year) == 0) continue;
    const LorenzCurve curve = lorenz(group_table(dist));
    for (std::size_t i = 0; i < curve.size(); ++i) {
      out << dist.year << '\t' << to_string(dist.scheme) << '\t' << format_double(curve.x(i))
          << '\t' << format_double(curve.y(i)) << '\n';
    }
  }
}

void write_classified(std::ostream& out, std::span<const ClassifiedEvent> classified) {
  out << "patent_id\tyear\tcode\tdivision\tcontext_flag\n";
  for (const ClassifiedEvent& ce : classified) {
    out << ce.event.patent_id << '\t' << ce.event.year << '\t' << ce.event.code << '\t'
        << ce.division << '\t' << (ce.context_flag ? 1 : 0) << '\n';
  }
}

void write_division_usage(std::ostream& out, std::span<const ClassifiedEvent> classified) {
  out << "division\tuses\tshare_pct\n";
  const std::map<Division, std::uint64_t> totals = division_use_totals(classified);
  std::uint64_t grand_total = 0;
  for (const auto& [division, uses] : totals) grand_total += uses;
  for (const auto& [division, uses] : totals) {
    out << division << '\t' << uses << '\t' << format_fixed2(percent_share(uses, grand_total))
        << '\n';
  }
  out << "Total\t" << grand_total << "\t100.00\n";
}

void write_decomposition_series(std::ostream& out,
                                const std::vector<DecompositionSeriesRow>& rows) {
  out << "year\ttotal\twithin\tbetween\twithin_share\n";
  for (const DecompositionSeriesRow& row : rows) {
    out << row.year << '\t' << format_double(row.total) << '\t' << format_double(row.within)
        << '\t' << format_double(row.between) << '\t'
        << (row.total != 0.0 ? format_double(row.within / row.total) : "NA") << '\n';
  }
}

void write_ranking(std::ostream& out, const DivisionRanking& gini_ranking,
                   const DivisionRanking& theil_ranking) {
  out << "measure\tdivision\tvalue\tn_g\tmu_g\tshare\tdegenerate\n";
  for (const DivisionRanking* ranking : {&gini_ranking, &theil_ranking}) {
    for (const DivisionRanking::Entry& entry : ranking->entries) {
      out << to_string(ranking->measure) << '\t' << entry.division << '\t'
          << format_double(entry.value) << '\t' << entry.n_codes << '\t'
          << format_double(entry.mu) << '\t' << format_double(entry.share) << '\t'
          << (entry.degenerate ? 1 : 0) << '\n';
    }
  }
}

namespace {

json parse_stats_json(const ParseStats& stats) {
  json j;
  j["rows_in"] = stats.rows_in;
  j["rows_ok"] = stats.rows_ok;
  j["rows_rejected"] = stats.rows_rejected;
  j["reject_reasons"] = stats.reject_reasons;
  j["delimiter"] = std::string(1, stats.delimiter);
  return j;
}

template <typename T>
json per_scheme_json(const PerScheme<T>& value) {
  return json{{"ipc", value.ipc}, {"cpc", value.cpc}};
}

json ingest_stats_json(const IngestStats& stats) {
  json j;
  j["patents"] = stats.patents;
  j["distinct_codes"] = per_scheme_json(stats.distinct_codes);
  j["total_uses"] = per_scheme_json(stats.total_uses);
  j["duplicates_collapsed"] = per_scheme_json(stats.duplicates_collapsed);
  j["excluded_by_window"] = per_scheme_json(stats.excluded_by_window);
  j["unmatched_cpc_links"] = stats.unmatched_cpc_links;
  j["priority_year_conflicts"] = stats.priority_year_conflicts;
  j["files"] = json{{"ipc", parse_stats_json(stats.ipc_file)},
                    {"app_reg", parse_stats_json(stats.app_reg_file)},
                    {"cpc", parse_stats_json(stats.cpc_file)}};
  return j;
}

json config_json(const RunConfig& config) {
  json j;
  j["ipc_file"] = config.ipc_file.string();
  j["app_reg_file"] = config.app_reg_file.string();
  j["cpc_file"] = config.cpc_file.string();
  j["concordance_file"] = config.concordance_file.string();
  j["year_start"] = config.year_start;
  j["year_end"] = config.year_end;
  j["schemes"] = scheme_list(config);
  j["split_dual"] = config.split_dual;
  j["lorenz_years"] = config.lorenz_years;
  j["out_dir"] = config.out_dir.string();
  j["delimiter"] = config.delimiter ? std::string(1, *config.delimiter) : std::string();
  j["threads"] = config.threads;
  j["freq_per_cell"] = config.freq_per_cell;
  return j;
}

}  // namespace

std::string ingest_stats_to_json(const IngestStats& stats) {
  return ingest_stats_json(stats).dump(2) + "\n";
}

std::string manifest_to_json(const RunConfig& config, const RunManifest& manifest) {
  json j;
  j["version"] = manifest.version;
  j["status"] = manifest.status;
  if (!manifest.error.empty()) j["error"] = manifest.error;
  j["config"] = config_json(config);
  j["ingest_stats"] = ingest_stats_json(manifest.ingest);
  j["row_counts"] = manifest.row_counts;
  j["input_digests"] = manifest.input_digests;
  j["output_digests"] = manifest.output_digests;
  j["notes"] = manifest.notes;
  return j.dump(2) + "\n";
}

RunManifest run(const RunConfig& config) {
  RunManifest manifest;
  manifest.version = std::string(kVersion);
  manifest.status = "ok";

  std::filesystem::create_directories(config.out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& name, auto&& writer) {
    const std::filesystem::path path = config.out_dir / name;
    std::ofstream out = open_out(path);
    writer(out);
    written.push_back(path);
  };

  try {
    if (config.year_start > config.year_end) {
      throw PipelineError("year window start " + std::to_string(config.year_start) +
                          " is after end " + std::to_string(config.year_end));
    }
    if (!config.scheme_ipc && !config.scheme_cpc) throw PipelineError("no scheme selected");

    const IngestResult ingest = ingest_for(config);
    manifest.ingest = ingest.stats;
    manifest.row_counts["events"] = ingest.events.size();
    emit("events.tsv", [&](std::ostream& out) { write_events(out, ingest.events); });
    emit("ingest_stats.json",
         [&](std::ostream& out) { out << ingest_stats_to_json(ingest.stats); });

    const std::map<YearScheme, FrequencyDistribution> dists =
        build_distributions(ingest.events);
    for (const auto& path : write_freq_outputs(config, dists)) written.push_back(path);
    std::uint64_t freq_rows = 0;
    for (const auto& [key, dist] : dists) freq_rows += group_table(dist).rows.size();
    manifest.row_counts["freq_rows"] = freq_rows;
    if (!dists.empty()) {
      emit("desc_stats.tsv", [&](std::ostream& out) { write_desc_stats(out, dists); });
    }

    emit("inequality.tsv", [&](std::ostream& out) { write_inequality(out, dists); });
    manifest.row_counts["inequality_rows"] = dists.size();
    if (!config.lorenz_years.empty()) {
      emit("lorenz.tsv", [&](std::ostream& out) { write_lorenz(out, dists, config.lorenz_years); });
    }

    const std::vector<ClassifiedEvent> classified = classify_for(config, ingest.events);
    manifest.row_counts["classified_events"] = classified.size();
    emit("classified.tsv", [&](std::ostream& out) { write_classified(out, classified); });
    emit("division_usage.tsv",
         [&](std::ostream& out) { write_division_usage(out, classified); });

    const std::map<int, PartitionedDistribution> partitions =
        partition_by_year(classified, config.split_dual);
    const std::vector<DecompositionSeriesRow> series = decomposition_series(partitions);
    manifest.row_counts["decomposition_rows"] = series.size();
    emit("decomposition.tsv",
         [&](std::ostream& out) { write_decomposition_series(out, series); });
    for (const auto& [year, part] : partitions) {
      const DivisionRanking by_gini = rank_divisions(part, Measure::gini);
      const DivisionRanking by_theil = rank_divisions(part, Measure::theil);
      emit("ranking_" + std::to_string(year) + ".tsv",
           [&](std::ostream& out) { write_ranking(out, by_gini, by_theil); });
    }
    manifest.row_counts["ranking_files"] = partitions.size();

    if (!config.split_dual) {
      manifest.notes.push_back(
          "split_dual=false merges each dual-classified code under its majority division "
          "for the year (ties to NACE 21); the merged construction is a stated convention");
    }

    for (const std::filesystem::path& path :
         {config.ipc_file, config.app_reg_file, config.cpc_file, config.concordance_file}) {
      if (!path.empty() && std::filesystem::exists(path)) {
        manifest.input_digests[path.string()] = digest_hex(fnv1a64_file(path));
      }
    }
    for (const std::filesystem::path& path : written) {
      manifest.output_digests[path.filename().string()] = digest_hex(fnv1a64_file(path));
    }
  } catch (const std::exception& e) {
    for (const std::filesystem::path& path : written) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
    manifest.status = "failed";
    manifest.error = e.what();
    std::ofstream out = open_out(config.out_dir / "manifest.json");
    out << manifest_to_json(config, manifest);
    throw PipelineError(e.what());
  }

  std::ofstream out = open_out(config.out_dir / "manifest.json");
  out << manifest_to_json(config, manifest);
  return manifest;
}

std::vector<std::filesystem::path> run_ingest_stage(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const std::filesystem::path events_path = config.out_dir / "events.tsv";
  const std::filesystem::path stats_path = config.out_dir / "ingest_stats.json";
  {
    std::ofstream out = open_out(events_path);
    write_events(out, ingest.events);
  }
  {
    std::ofstream out = open_out(stats_path);
    out << ingest_stats_to_json(ingest.stats);
  }
  return {events_path, stats_path};
}

std::vector<std::filesystem::path> run_freq_stage(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const auto dists = build_distributions(ingest.events);
  std::vector<std::filesystem::path> written = write_freq_outputs(config, dists);
  if (!dists.empty()) {
    const std::filesystem::path stats_path = config.out_dir / "desc_stats.tsv";
    std::ofstream out = open_out(stats_path);
    write_desc_stats(out, dists);
    written.push_back(stats_path);
  }
  return written;
}

std::vector<std::filesystem::path> run_ineq_stage(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const auto dists = build_distributions(ingest.events);
  const std::filesystem::path path = config.out_dir / "inequality.tsv";
  std::ofstream out = open_out(path);
  write_inequality(out, dists);
  return {path};
}

std::vector<std::filesystem::path> run_lorenz_stage(const RunConfig& config) {
  if (config.lorenz_years.empty()) {
    throw PipelineError("lorenz stage requires at least one year (--lorenz-years)");
  }
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const auto dists = build_distributions(ingest.events);
  const std::filesystem::path path = config.out_dir / "lorenz.tsv";
  std::ofstream out = open_out(path);
  write_lorenz(out, dists, config.lorenz_years);
  return {path};
}

std::vector<std::filesystem::path> run_classify_stage(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const std::vector<ClassifiedEvent> classified = classify_for(config, ingest.events);
  const std::filesystem::path events_path = config.out_dir / "classified.tsv";
  const std::filesystem::path usage_path = config.out_dir / "division_usage.tsv";
  {
    std::ofstream out = open_out(events_path);
    write_classified(out, classified);
  }
  {
    std::ofstream out = open_out(usage_path);
    write_division_usage(out, classified);
  }
  return {events_path, usage_path};
}

std::vector<std::filesystem::path> run_decomp_stage(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const std::vector<ClassifiedEvent> classified = classify_for(config, ingest.events);
  const auto partitions = partition_by_year(classified, config.split_dual);
  const std::filesystem::path path = config.out_dir / "decomposition.tsv";
  std::ofstream out = open_out(path);
  write_decomposition_series(out, decomposition_series(partitions));
  return {path};
}

std::vector<std::filesystem::path> run_rank_stage(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  const IngestResult ingest = ingest_for(config);
  const std::vector<ClassifiedEvent> classified = classify_for(config, ingest.events);
  const auto partitions = partition_by_year(classified, config.split_dual);
  std::vector<std::filesystem::path> written;
  for (const auto& [year, part] : partitions) {
    const DivisionRanking by_gini = rank_divisions(part, Measure::gini);
    const DivisionRanking by_theil = rank_divisions(part, Measure::theil);
    const std::filesystem::path path = config.out_dir / ("ranking_" + std::to_string(year) +
                                                         ".tsv");
    std::ofstream out = open_out(path);
    write_ranking(out, by_gini, by_theil);
    written.push_back(path);
  }
  return written;
}

}  // namespace patineq
