#include "patineq/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "patineq/text.hpp"

namespace patineq {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void sort_unique(std::vector<PatentCodeEvent>& events, std::uint64_t* collapsed) {
  std::sort(events.begin(), events.end());
  auto last = std::unique(events.begin(), events.end());
  if (collapsed) *collapsed += static_cast<std::uint64_t>(events.end() - last);
  events.erase(last, events.end());
}

}  // namespace

Parsed<RawIpcRecord> read_ipc_file(const std::filesystem::path& path,
                                   std::optional<char> delimiter, unsigned threads) {
  static constexpr std::string_view columns[] = {"pct_nbr", "prio_year", "app_year", "IPC"};
  const std::string text = read_file(path);
  return parse_delimited<RawIpcRecord>(
      text, columns, delimiter, threads,
      [](std::span<const std::string_view> f, std::string& reason) -> std::optional<RawIpcRecord> {
        RawIpcRecord rec;
        rec.pct_nbr = trim(f[0]);
        rec.ipc_code = normalize_code(f[3]);
        if (rec.pct_nbr.empty() || rec.ipc_code.empty()) {
          reason = "empty_field";
          return std::nullopt;
        }
        const auto prio = parse_year(f[1]);
        const auto app = parse_year(f[2]);
        if (!prio || !app) {
          reason = "bad_year";
          return std::nullopt;
        }
        rec.prio_year = *prio;
        rec.app_year = *app;
        return rec;
      });
}

Parsed<RawAppRegRecord> read_app_reg_file(const std::filesystem::path& path,
                                          std::optional<char> delimiter, unsigned threads) {
  static constexpr std::string_view columns[] = {"pct_nbr", "appln_id"};
  const std::string text = read_file(path);
  return parse_delimited<RawAppRegRecord>(
      text, columns, delimiter, threads,
      [](std::span<const std::string_view> f,
         std::string& reason) -> std::optional<RawAppRegRecord> {
        RawAppRegRecord rec;
        rec.pct_nbr = trim(f[0]);
        rec.appln_id = trim(f[1]);
        if (rec.pct_nbr.empty() || rec.appln_id.empty()) {
          reason = "empty_field";
          return std::nullopt;
        }
        return rec;
      });
}

Parsed<RawCpcRecord> read_cpc_file(const std::filesystem::path& path,
                                   std::optional<char> delimiter, unsigned threads) {
  static constexpr std::string_view columns[] = {"appln_id", "CPC"};
  const std::string text = read_file(path);
  return parse_delimited<RawCpcRecord>(
      text, columns, delimiter, threads,
      [](std::span<const std::string_view> f, std::string& reason) -> std::optional<RawCpcRecord> {
        RawCpcRecord rec;
        rec.appln_id = trim(f[0]);
        rec.cpc_code = normalize_code(f[1]);
        if (rec.appln_id.empty() || rec.cpc_code.empty()) {
          reason = "empty_field";
          return std::nullopt;
        }
        return rec;
      });
}

IpcSide build_ipc_side(std::span<const RawIpcRecord> records) {
  IpcSide side;
  for (const RawIpcRecord& rec : records) {
    auto [it, inserted] = side.priority_year.emplace(rec.pct_nbr, rec.prio_year);
    if (!inserted && it->second != rec.prio_year) {
      // One priority year per patent; keep the earliest, count the anomaly.
      ++side.year_conflicts;
      it->second = std::min(it->second, rec.prio_year);
    }
  }
  side.events.reserve(records.size());
  for (const RawIpcRecord& rec : records) {
    side.events.push_back(PatentCodeEvent{rec.pct_nbr, side.priority_year.at(rec.pct_nbr),
                                          Scheme::ipc, rec.ipc_code});
  }
  sort_unique(side.events, &side.duplicates_collapsed);
  return side;
}

CpcJoinResult join_cpc(const std::map<std::string, int>& priority_year_by_patent,
                       std::span<const RawAppRegRecord> app_reg,
                       std::span<const RawCpcRecord> cpc) {
  CpcJoinResult result;

  // appln_id -> linked patents, associations recorded as-is, deduplicated.
  std::unordered_map<std::string, std::set<std::string>> patents_by_appln;
  for (const RawAppRegRecord& rec : app_reg) patents_by_appln[rec.appln_id].insert(rec.pct_nbr);

  result.events.reserve(cpc.size());
  for (const RawCpcRecord& rec : cpc) {
    auto link = patents_by_appln.find(rec.appln_id);
    bool matched = false;
    if (link != patents_by_appln.end()) {
      for (const std::string& pct : link->second) {
        auto year = priority_year_by_patent.find(pct);
        if (year == priority_year_by_patent.end()) continue;
        result.events.push_back(PatentCodeEvent{pct, year->second, Scheme::cpc, rec.cpc_code});
        matched = true;
      }
    }
    if (!matched) ++result.unmatched;
  }
  sort_unique(result.events, &result.duplicates_collapsed);
  return result;
}

std::vector<PatentCodeEvent> filter_window(std::vector<PatentCodeEvent> events, int start,
                                           int end, PerScheme<std::uint64_t>* excluded) {
  if (start > end) {
    throw std::invalid_argument("year window start " + std::to_string(start) +
                                " is after end " + std::to_string(end));
  }
  auto last = std::remove_if(events.begin(), events.end(), [&](const PatentCodeEvent& e) {
    if (e.year >= start && e.year <= end) return false;
    if (excluded) ++(*excluded)[e.scheme];
    return true;
  });
  events.erase(last, events.end());
  return events;
}

IngestResult ingest_files(const std::filesystem::path& ipc_path,
                          const std::filesystem::path& app_reg_path,
                          const std::filesystem::path& cpc_path, const IngestOptions& options) {
  IngestResult result;

  Parsed<RawIpcRecord> ipc = read_ipc_file(ipc_path, options.delimiter, options.threads);
  result.stats.ipc_file = ipc.stats;
  IpcSide side = build_ipc_side(ipc.records);
  result.stats.priority_year_conflicts = side.year_conflicts;

  std::vector<PatentCodeEvent> events;
  if (options.want_ipc) {
    events = std::move(side.events);
    result.stats.duplicates_collapsed.ipc = side.duplicates_collapsed;
  }

  if (options.want_cpc) {
    Parsed<RawAppRegRecord> reg = read_app_reg_file(app_reg_path, options.delimiter,
                                                    options.threads);
    result.stats.app_reg_file = reg.stats;
    Parsed<RawCpcRecord> cpc = read_cpc_file(cpc_path, options.delimiter, options.threads);
    result.stats.cpc_file = cpc.stats;

    CpcJoinResult join = join_cpc(side.priority_year, reg.records, cpc.records);
    result.stats.unmatched_cpc_links = join.unmatched;
    result.stats.duplicates_collapsed.cpc = join.duplicates_collapsed;
    events.insert(events.end(), std::make_move_iterator(join.events.begin()),
                  std::make_move_iterator(join.events.end()));
  }

  events = filter_window(std::move(events), options.year_start, options.year_end,
                         &result.stats.excluded_by_window);
  std::sort(events.begin(), events.end());

  std::unordered_set<std::string> patents;
  PerScheme<std::unordered_set<std::string>> codes;
  for (const PatentCodeEvent& e : events) {
    patents.insert(e.patent_id);
    codes[e.scheme].insert(e.code);
    ++result.stats.total_uses[e.scheme];
  }
  result.stats.patents = patents.size();
  result.stats.distinct_codes.ipc = codes.ipc.size();
  result.stats.distinct_codes.cpc = codes.cpc.size();

  result.events = std::move(events);
  return result;
}

void write_events(std::ostream& out, std::span<const PatentCodeEvent> events) {
  out << "patent_id\tyear\tscheme\tcode\n";
  for (const PatentCodeEvent& e : events) {
    out << e.patent_id << '\t' << e.year << '\t' << to_string(e.scheme) << '\t' << e.code << '\n';
  }
}

}  // namespace patineq
