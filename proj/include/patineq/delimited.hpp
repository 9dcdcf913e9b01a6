#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patineq/text.hpp"

namespace patineq {

/// Fatal input-contract violation: missing required column, unreadable
/// header, unsniffable delimiter.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Picks the delimiter from a header line among {',', ';', '|', '\t'} by
/// highest occurrence count (ties resolved in that order).
char sniff_delimiter(std::string_view header_line);

/// Resolves required column names against a header row. Matching is
/// case-insensitive on trimmed names; extra columns are ignored.
class HeaderIndex {
 public:
  HeaderIndex(std::string_view header_line, std::span<const std::string_view> required,
              char delimiter);

  std::size_t arity() const { return arity_; }
  /// Field position of the i-th required column.
  std::size_t position(std::size_t i) const { return positions_[i]; }

 private:
  std::size_t arity_ = 0;
  std::vector<std::size_t> positions_;
};

void split_fields(std::string_view line, char delimiter, std::vector<std::string_view>& out);

/// Strips one trailing '\r' (CRLF input).
std::string_view strip_cr(std::string_view line);

struct ParseStats {
  std::uint64_t rows_in = 0;  // data rows, header excluded
  std::uint64_t rows_ok = 0;
  std::uint64_t rows_rejected = 0;
  std::map<std::string, std::uint64_t> reject_reasons;
  char delimiter = ',';

  void merge(const ParseStats& other) {
    rows_in += other.rows_in;
    rows_ok += other.rows_ok;
    rows_rejected += other.rows_rejected;
    for (const auto& [reason, count] : other.reject_reasons) reject_reasons[reason] += count;
  }
};

template <typename Record>
struct Parsed {
  std::vector<Record> records;
  ParseStats stats;
};

namespace detail {

/// Chunk boundaries over `body`, snapped to line starts. Returns at most
/// `threads` non-empty [begin, end) byte ranges covering the whole body.
std::vector<std::pair<std::size_t, std::size_t>> chunk_lines(std::string_view body,
                                                             unsigned threads);

template <typename Record, typename Extract>
Parsed<Record> parse_range(std::string_view chunk, const HeaderIndex& header, char delimiter,
                           std::size_t n_required, const Extract& extract) {
  Parsed<Record> out;
  std::vector<std::string_view> fields;
  std::vector<std::string_view> picked(n_required);
  std::size_t pos = 0;
  while (pos < chunk.size()) {
    std::size_t eol = chunk.find('\n', pos);
    std::string_view line = chunk.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? chunk.size() : eol + 1;
    line = strip_cr(line);

    ++out.stats.rows_in;
    split_fields(line, delimiter, fields);
    if (fields.size() != header.arity()) {
      ++out.stats.rows_rejected;
      ++out.stats.reject_reasons["field_count"];
      continue;
    }
    for (std::size_t i = 0; i < n_required; ++i) picked[i] = fields[header.position(i)];
    std::string reason;
    if (std::optional<Record> rec = extract(std::span<const std::string_view>(picked), reason)) {
      out.records.push_back(std::move(*rec));
      ++out.stats.rows_ok;
    } else {
      ++out.stats.rows_rejected;
      ++out.stats.reject_reasons[reason.empty() ? "invalid" : reason];
    }
  }
  return out;
}

}  // namespace detail

/// Parses header-named delimited text. `extract` maps the required fields
/// (in `columns` order) to a record, or returns nullopt with a reject
/// reason. Malformed rows are counted, never fatal; a missing column is.
/// The merged result is identical for any `threads` value.
template <typename Record, typename Extract>
Parsed<Record> parse_delimited(std::string_view text, std::span<const std::string_view> columns,
                               std::optional<char> delimiter, unsigned threads,
                               const Extract& extract) {
  std::size_t header_end = text.find('\n');
  std::string_view header_line =
      strip_cr(header_end == std::string_view::npos ? text : text.substr(0, header_end));
  if (trim(header_line).empty()) throw SchemaError("empty input: missing header row");

  const char delim = delimiter ? *delimiter : sniff_delimiter(header_line);
  HeaderIndex header(header_line, columns, delim);
  std::string_view body =
      header_end == std::string_view::npos ? std::string_view{} : text.substr(header_end + 1);

  Parsed<Record> out;
  out.stats.delimiter = delim;
  auto ranges = detail::chunk_lines(body, threads);
  if (ranges.size() <= 1) {
    if (!ranges.empty()) {
      Parsed<Record> part = detail::parse_range<Record>(
          body.substr(ranges[0].first, ranges[0].second - ranges[0].first), header, delim,
          columns.size(), extract);
      out.records = std::move(part.records);
      part.stats.delimiter = delim;
      out.stats = std::move(part.stats);
      out.stats.delimiter = delim;
    }
    return out;
  }

  std::vector<std::future<Parsed<Record>>> futures;
  futures.reserve(ranges.size());
  for (auto [begin, end] : ranges) {
    futures.push_back(std::async(std::launch::async, [&, begin = begin, end = end] {
      return detail::parse_range<Record>(body.substr(begin, end - begin), header, delim,
                                         columns.size(), extract);
    }));
  }
  for (auto& fut : futures) {
    Parsed<Record> part = fut.get();
    out.records.insert(out.records.end(), std::make_move_iterator(part.records.begin()),
                       std::make_move_iterator(part.records.end()));
    out.stats.merge(part.stats);
  }
  out.stats.delimiter = delim;
  return out;
}

}  // namespace patineq
