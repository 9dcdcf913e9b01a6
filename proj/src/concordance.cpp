#include "patineq/concordance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "patineq/delimited.hpp"
#include "patineq/text.hpp"

namespace patineq {

const std::vector<Division>& known_divisions() {
  static const std::vector<Division> divisions = [] {
    std::vector<Division> d;
    for (int i = 10; i <= 32; ++i) d.push_back(std::to_string(i));
    d.push_back("42");
    d.push_back("43");
    d.push_back("62");
    d.push_back(std::string(kCoIpc));
    return d;
  }();
  return divisions;
}

bool is_known_division(std::string_view label) {
  const auto& divisions = known_divisions();
  return std::find(divisions.begin(), divisions.end(), label) != divisions.end();
}

ConcordanceTable ConcordanceTable::from_entries(
    std::span<const std::pair<std::string, std::string>> entries) {
  ConcordanceTable table;
  for (const auto& [raw_prefix, raw_division] : entries) {
    const std::string prefix = normalize_code(raw_prefix);
    const std::string division(trim(raw_division));
    if (prefix.empty()) throw ConcordanceError("concordance: empty ipc_prefix");
    if (!is_known_division(division)) {
      throw ConcordanceError("concordance: unknown NACE division label '" + division +
                             "' for prefix '" + prefix + "'");
    }
    auto [it, inserted] = table.by_prefix_.emplace(prefix, division);
    if (!inserted && it->second != division) {
      throw ConcordanceError("concordance: prefix '" + prefix + "' mapped to both '" +
                             it->second + "' and '" + division + "'");
    }
  }
  if (table.by_prefix_.empty()) {
    throw ConcordanceError("concordance: table is empty, partition impossible");
  }
  for (const auto& [prefix, division] : table.by_prefix_) {
    table.prefix_lengths_.push_back(prefix.size());
  }
  std::sort(table.prefix_lengths_.begin(), table.prefix_lengths_.end(), std::greater<>());
  table.prefix_lengths_.erase(
      std::unique(table.prefix_lengths_.begin(), table.prefix_lengths_.end()),
      table.prefix_lengths_.end());
  return table;
}

ConcordanceTable ConcordanceTable::load(std::istream& in, std::optional<char> delimiter) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = std::move(buf).str();

  static constexpr std::string_view columns[] = {"ipc_prefix", "nace_division"};
  struct Entry {
    std::string prefix;
    std::string division;
  };
  auto parsed = parse_delimited<Entry>(
      text, columns, delimiter, 1,
      [](std::span<const std::string_view> f, std::string& reason) -> std::optional<Entry> {
        Entry e{std::string(trim(f[0])), std::string(trim(f[1]))};
        if (e.prefix.empty() || e.division.empty()) {
          reason = "empty_field";
          return std::nullopt;
        }
        return e;
      });
  // A malformed concordance is fatal: this file drives the whole partition.
  if (parsed.stats.rows_rejected > 0) {
    throw ConcordanceError("concordance: " + std::to_string(parsed.stats.rows_rejected) +
                           " malformed row(s)");
  }
  std::vector<std::pair<std::string, std::string>> entries;
  entries.reserve(parsed.records.size());
  for (Entry& e : parsed.records) entries.emplace_back(std::move(e.prefix), std::move(e.division));
  return from_entries(entries);
}

ConcordanceTable ConcordanceTable::load_file(const std::filesystem::path& path,
                                             std::optional<char> delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConcordanceError("cannot open concordance file: " + path.string());
  return load(in, delimiter);
}

Division ConcordanceTable::lookup(std::string_view normalized_code) const {
  for (std::size_t len : prefix_lengths_) {
    if (len > normalized_code.size()) continue;
    auto it = by_prefix_.find(std::string(normalized_code.substr(0, len)));
    if (it != by_prefix_.end()) return it->second;
  }
  return std::string(kCoIpc);
}

std::string_view ipc_subclass(std::string_view normalized_code) {
  if (normalized_code.size() < 4) return {};
  const auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (upper(normalized_code[0]) && digit(normalized_code[1]) && digit(normalized_code[2]) &&
      upper(normalized_code[3])) {
    return normalized_code.substr(0, 4);
  }
  return {};
}

bool in_context_group(std::string_view normalized_code) {
  // A61K main group 8, spelled "A61K 8/..", "A61K8/..", "A61K008/.." etc.
  if (!normalized_code.starts_with("A61K")) return false;
  std::string_view rest = normalized_code.substr(4);
  if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  std::size_t digits = 0;
  std::uint64_t group = 0;
  while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') {
    group = group * 10 + (rest[digits] - '0');
    ++digits;
  }
  if (digits == 0 || group != 8) return false;
  return digits == rest.size() || rest[digits] == '/';
}

std::vector<ClassifiedEvent> classify(std::span<const PatentCodeEvent> patent_events,
                                      const ConcordanceTable& table,
                                      const ConditionalRule& rule) {
  bool context = false;
  for (const PatentCodeEvent& e : patent_events) {
    if (in_context_group(e.code)) {
      context = true;
      break;
    }
  }
  std::vector<ClassifiedEvent> out;
  out.reserve(patent_events.size());
  for (const PatentCodeEvent& e : patent_events) {
    ClassifiedEvent ce{e, {}, context};
    const std::string_view subclass = ipc_subclass(e.code);
    if (rule.trigger_subclasses.count(subclass) > 0) {
      ce.division = context ? rule.with_context_trigger : rule.without_context;
    } else if (subclass == rule.special_subclass) {
      ce.division = context ? rule.with_context_special : rule.without_context;
    } else {
      ce.division = table.lookup(e.code);
    }
    out.push_back(std::move(ce));
  }
  return out;
}

std::vector<ClassifiedEvent> classify_all(std::span<const PatentCodeEvent> events,
                                          const ConcordanceTable& table,
                                          const ConditionalRule& rule) {
  std::vector<PatentCodeEvent> ipc_events;
  ipc_events.reserve(events.size());
  for (const PatentCodeEvent& e : events) {
    if (e.scheme == Scheme::ipc) ipc_events.push_back(e);
  }
  std::sort(ipc_events.begin(), ipc_events.end());

  std::vector<ClassifiedEvent> out;
  out.reserve(ipc_events.size());
  std::size_t begin = 0;
  while (begin < ipc_events.size()) {
    std::size_t end = begin + 1;
    while (end < ipc_events.size() &&
           ipc_events[end].patent_id == ipc_events[begin].patent_id) {
      ++end;
    }
    std::vector<ClassifiedEvent> patent = classify(
        std::span<const PatentCodeEvent>(ipc_events).subspan(begin, end - begin), table, rule);
    out.insert(out.end(), std::make_move_iterator(patent.begin()),
               std::make_move_iterator(patent.end()));
    begin = end;
  }
  return out;
}

std::uint64_t PartitionedDistribution::code_count() const {
  std::uint64_t n = 0;
  for (const auto& [division, dist] : subsets) n += dist.code_count();
  return n;
}

std::uint64_t PartitionedDistribution::total_uses() const {
  std::uint64_t total = 0;
  for (const auto& [division, dist] : subsets) total += dist.total_uses();
  return total;
}

double PartitionedDistribution::mean() const {
  return static_cast<double>(total_uses()) / static_cast<double>(code_count());
}

namespace {

/// Key that owns a dual-classified code's context variant. '\t' cannot
/// occur in a normalized code, so the identity never collides with a real
/// symbol.
std::string context_identity(const std::string& code) { return code + "\tctx"; }

}  // namespace

PartitionedDistribution partition(std::span<const ClassifiedEvent> classified, int year,
                                  bool split_dual) {
  PartitionedDistribution part;
  part.year = year;

  ConditionalRule rule;  // subclass shape only; divisions come from events
  for (const ClassifiedEvent& ce : classified) {
    if (ce.event.year != year) {
      throw std::invalid_argument("partition: event year " + std::to_string(ce.event.year) +
                                  " does not match partition year " + std::to_string(year));
    }
    if (ce.event.scheme != Scheme::ipc) {
      throw std::invalid_argument("partition: only IPC events can be partitioned");
    }
  }

  if (split_dual) {
    for (const ClassifiedEvent& ce : classified) {
      const bool dual = rule.is_dual_subclass(ipc_subclass(ce.event.code));
      const std::string identity =
          dual && ce.context_flag ? context_identity(ce.event.code) : ce.event.code;
      FrequencyDistribution& dist = part.subsets[ce.division];
      if (dist.counts.empty()) {
        dist.year = year;
        dist.scheme = Scheme::ipc;
      }
      ++dist.counts[identity];
    }
    return part;
  }

  // Unsplit: a dual code's uses merge under one identity, placed in its
  // majority division for the year (ties to the no-context division).
  struct CodeTally {
    std::uint64_t with_context = 0;
    std::uint64_t without_context = 0;
    Division context_division;  // division seen on context uses (20 or 32)
    Division plain_division;    // division on non-dual / no-context uses
    bool dual = false;
  };
  std::map<std::string, CodeTally> tallies;
  for (const ClassifiedEvent& ce : classified) {
    CodeTally& tally = tallies[ce.event.code];
    tally.dual = rule.is_dual_subclass(ipc_subclass(ce.event.code));
    if (tally.dual && ce.context_flag) {
      ++tally.with_context;
      tally.context_division = ce.division;
    } else {
      ++tally.without_context;
      tally.plain_division = ce.division;
    }
  }
  for (const auto& [code, tally] : tallies) {
    Division division;
    if (!tally.dual) {
      division = tally.plain_division;
    } else if (tally.with_context > tally.without_context) {
      division = tally.context_division;
    } else {
      // Tie or no-context majority: the no-context division (NACE 21).
      division = tally.without_context > 0 ? tally.plain_division : rule.without_context;
    }
    FrequencyDistribution& dist = part.subsets[division];
    if (dist.counts.empty()) {
      dist.year = year;
      dist.scheme = Scheme::ipc;
    }
    dist.counts[code] += tally.with_context + tally.without_context;
  }
  return part;
}

std::map<int, PartitionedDistribution> partition_by_year(
    std::span<const ClassifiedEvent> classified, bool split_dual) {
  std::map<int, std::vector<ClassifiedEvent>> by_year;
  for (const ClassifiedEvent& ce : classified) by_year[ce.event.year].push_back(ce);
  std::map<int, PartitionedDistribution> out;
  for (const auto& [year, events] : by_year) {
    out.emplace(year, partition(events, year, split_dual));
  }
  return out;
}

std::map<Division, std::uint64_t> division_use_totals(
    std::span<const ClassifiedEvent> classified) {
  std::map<Division, std::uint64_t> totals;
  for (const ClassifiedEvent& ce : classified) ++totals[ce.division];
  return totals;
}

double percent_share(std::uint64_t part, std::uint64_t whole) {
  const double pct = 100.0 * static_cast<double>(part) / static_cast<double>(whole);
  return std::round(pct * 100.0) / 100.0;
}

}  // namespace patineq
