#include "patineq/delimited.hpp"

#include <algorithm>
#include <array>

#include "patineq/text.hpp"

namespace patineq {

char sniff_delimiter(std::string_view header_line) {
  constexpr std::array<char, 4> candidates = {',', ';', '|', '\t'};
  char best = 0;
  std::size_t best_count = 0;
  for (char c : candidates) {
    const std::size_t count = std::count(header_line.begin(), header_line.end(), c);
    if (count > best_count) {
      best = c;
      best_count = count;
    }
  }
  if (best_count == 0) {
    throw SchemaError(
        "cannot sniff delimiter: header row contains none of comma, semicolon, pipe or tab");
  }
  return best;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

void split_fields(std::string_view line, char delimiter, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

HeaderIndex::HeaderIndex(std::string_view header_line, std::span<const std::string_view> required,
                         char delimiter) {
  std::vector<std::string_view> names;
  split_fields(header_line, delimiter, names);
  arity_ = names.size();
  positions_.reserve(required.size());
  for (std::string_view want : required) {
    std::size_t found = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (iequals(trim(names[i]), want)) {
        found = i;
        break;
      }
    }
    if (found == names.size()) {
      throw SchemaError("missing required column: " + std::string(want));
    }
    positions_.push_back(found);
  }
}

namespace detail {

std::vector<std::pair<std::size_t, std::size_t>> chunk_lines(std::string_view body,
                                                             unsigned threads) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  if (body.empty()) return ranges;
  if (threads <= 1) {
    ranges.emplace_back(0, body.size());
    return ranges;
  }
  const std::size_t target = std::max<std::size_t>(1, body.size() / threads);
  std::size_t begin = 0;
  while (begin < body.size()) {
    std::size_t end = std::min(begin + target, body.size());
    // Snap forward to the next line start.
    if (end < body.size()) {
      std::size_t nl = body.find('\n', end);
      end = nl == std::string_view::npos ? body.size() : nl + 1;
    }
    ranges.emplace_back(begin, end);
    begin = end;
  }
  return ranges;
}

}  // namespace detail

}  // namespace patineq
