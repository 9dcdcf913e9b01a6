#include <doctest.h>

#include <numeric>
#include <random>
#include <string>

#include "patineq/delimited.hpp"

using namespace patineq;

namespace {

struct Pair {
  std::string a;
  std::string b;
  bool operator==(const Pair&) const = default;
};

constexpr std::string_view kPairColumns[] = {"a", "b"};

Parsed<Pair> parse_pairs(std::string_view text, std::optional<char> delim = std::nullopt,
                         unsigned threads = 1) {
  return parse_delimited<Pair>(
      text, kPairColumns, delim, threads,
      [](std::span<const std::string_view> f, std::string& reason) -> std::optional<Pair> {
        if (f[0].empty()) {
          reason = "empty_field";
          return std::nullopt;
        }
        return Pair{std::string(f[0]), std::string(f[1])};
      });
}

}  // namespace

TEST_CASE("delimiter sniffing picks the majority candidate") {
  CHECK(sniff_delimiter("a,b,c") == ',');
  CHECK(sniff_delimiter("a;b;c") == ';');
  CHECK(sniff_delimiter("a|b|c") == '|');
  CHECK(sniff_delimiter("a\tb\tc") == '\t');
  CHECK(sniff_delimiter("a,b|c|d") == '|');
  CHECK_THROWS_AS(sniff_delimiter("justonecolumn"), SchemaError);
}

TEST_CASE("header columns matched by name, order free, extras ignored") {
  auto parsed = parse_pairs("x|b|a\n1|2|3\n");
  REQUIRE(parsed.records.size() == 1);
  CHECK(parsed.records[0] == Pair{"3", "2"});
  CHECK(parsed.stats.delimiter == '|');
}

TEST_CASE("missing required column is a fatal schema error naming it") {
  try {
    parse_pairs("a|c\n1|2\n");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }
}

TEST_CASE("malformed rows are rejected and counted, not fatal") {
  auto parsed = parse_pairs("a,b\n1,2\n1,2,3\nonly\n,missing\n4,5\n");
  CHECK(parsed.records.size() == 2);  // "1,2" and "4,5"
  CHECK(parsed.stats.rows_in == 5);
  CHECK(parsed.stats.rows_ok == 2);
  CHECK(parsed.stats.rows_rejected == 3);
  CHECK(parsed.stats.reject_reasons.at("field_count") == 2);
  CHECK(parsed.stats.reject_reasons.at("empty_field") == 1);
}

TEST_CASE("1000 rows with 3 malformed leave 997 records") {
  std::string text = "a,b\n";
  for (int i = 0; i < 1000; ++i) {
    if (i == 100 || i == 500 || i == 900) {
      text += "broken\n";
    } else {
      text += "k" + std::to_string(i) + ",v\n";
    }
  }
  auto parsed = parse_pairs(text);
  CHECK(parsed.records.size() == 997);
  CHECK(parsed.stats.rows_rejected == 3);
  CHECK(parsed.stats.rows_in == 1000);
}

TEST_CASE("conservation: rows_in == rows_ok + rows_rejected") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::string text = "a;b\n";
    const unsigned rows = 1 + rng() % 200;
    for (unsigned i = 0; i < rows; ++i) {
      switch (rng() % 4) {
        case 0: text += "x;y\n"; break;
        case 1: text += "x;y;z\n"; break;
        case 2: text += ";y\n"; break;
        default: text += "q" + std::to_string(i) + ";v\n"; break;
      }
    }
    auto parsed = parse_pairs(text);
    CHECK(parsed.stats.rows_in == rows);
    CHECK(parsed.stats.rows_in == parsed.stats.rows_ok + parsed.stats.rows_rejected);
  }
}

TEST_CASE("parallel parse merges to the identical result") {
  std::string text = "a\tb\n";
  for (int i = 0; i < 5000; ++i) {
    text += "k" + std::to_string(i) + "\tv" + std::to_string(i % 7) + "\n";
    if (i % 97 == 0) text += "bad row without tabs... almost\n";
  }
  auto seq = parse_pairs(text, std::nullopt, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    auto par = parse_pairs(text, std::nullopt, threads);
    CHECK(par.records == seq.records);
    CHECK(par.stats.rows_in == seq.stats.rows_in);
    CHECK(par.stats.rows_rejected == seq.stats.rows_rejected);
    CHECK(par.stats.reject_reasons == seq.stats.reject_reasons);
  }
}

TEST_CASE("header-only and trailing-newline edge cases") {
  CHECK(parse_pairs("a,b\n").records.empty());
  CHECK(parse_pairs("a,b").records.empty());
  auto no_trailing = parse_pairs("a,b\n1,2");
  CHECK(no_trailing.records.size() == 1);
  CHECK_THROWS_AS(parse_pairs(""), SchemaError);
  CHECK_THROWS_AS(parse_pairs("\n1,2\n"), SchemaError);
}

TEST_CASE("CRLF input is accepted") {
  auto parsed = parse_pairs("a,b\r\n1,2\r\n");
  REQUIRE(parsed.records.size() == 1);
  CHECK(parsed.records[0] == Pair{"1", "2"});
}
