#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "patineq/frequency.hpp"
#include "patineq/measures.hpp"

using namespace patineq;

namespace {

GroupedFrequencyTable make_table(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& rows) {
  GroupedFrequencyTable table;
  for (auto [x, n] : rows) table.rows.push_back({x, n});
  return table;
}

}  // namespace

TEST_CASE("build_distributions counts per (year, scheme) cell") {
  std::vector<PatentCodeEvent> events = {
      {"P1", 1978, Scheme::ipc, "A"},
      {"P2", 1978, Scheme::ipc, "A"},
      {"P1", 1978, Scheme::ipc, "B"},
  };
  auto dists = build_distributions(events);
  REQUIRE(dists.size() == 1);
  const FrequencyDistribution& d = dists.at({1978, Scheme::ipc});
  CHECK(d.counts.at("A") == 2);
  CHECK(d.counts.at("B") == 1);
  CHECK(d.code_count() == 2);
  CHECK(d.total_uses() == 3);
}

TEST_CASE("the same code in different years lands in separate distributions") {
  std::vector<PatentCodeEvent> events = {
      {"P1", 1978, Scheme::ipc, "A"},
      {"P2", 1979, Scheme::ipc, "A"},
  };
  auto dists = build_distributions(events);
  REQUIRE(dists.size() == 2);
  CHECK(dists.at({1978, Scheme::ipc}).counts.at("A") == 1);
  CHECK(dists.at({1979, Scheme::ipc}).counts.at("A") == 1);
}

TEST_CASE("schemes are aggregated independently") {
  std::vector<PatentCodeEvent> events = {
      {"P1", 1978, Scheme::ipc, "A"},
      {"P1", 1978, Scheme::cpc, "A"},
  };
  auto dists = build_distributions(events);
  CHECK(dists.size() == 2);
  CHECK(build_distributions({}).empty());
}

TEST_CASE("group_table enumerates distinct counts ascending") {
  FrequencyDistribution dist{1978, Scheme::ipc, {{"A", 2}, {"B", 1}, {"C", 1}}};
  const GroupedFrequencyTable table = group_table(dist);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].use_frequency == 1);
  CHECK(table.rows[0].n_codes == 2);
  CHECK(table.rows[1].use_frequency == 2);
  CHECK(table.rows[1].n_codes == 1);
  CHECK(group_table(FrequencyDistribution{}).rows.empty());
}

TEST_CASE("1978 fixtures reconstructed from the published frequency tables") {
  const GroupedFrequencyTable ipc = make_table(oracle::table1_ipc_1978());
  CHECK(ipc.code_count() == 3979);
  CHECK(ipc.total_uses() == 5068);
  CHECK(ipc.rows.front().use_frequency == 1);
  CHECK(ipc.rows.front().n_codes == 3260);
  CHECK(ipc.rows.back().use_frequency == 18);
  CHECK(ipc.rows.back().n_codes == 1);

  const GroupedFrequencyTable cpc = make_table(oracle::table1_cpc_1978());
  CHECK(cpc.code_count() == 4269);
  CHECK(cpc.total_uses() == 5055);
  CHECK(cpc.rows.front().n_codes == 3791);
  CHECK(cpc.rows.back().use_frequency == 15);

  // expand + regroup is the identity on the table.
  const FrequencyDistribution expanded = expand_table(ipc, 1978, Scheme::ipc);
  CHECK(expanded.code_count() == 3979);
  CHECK(expanded.total_uses() == 5068);
  const GroupedFrequencyTable regrouped = group_table(expanded);
  REQUIRE(regrouped.rows.size() == ipc.rows.size());
  for (std::size_t i = 0; i < regrouped.rows.size(); ++i) {
    CHECK(regrouped.rows[i].use_frequency == ipc.rows[i].use_frequency);
    CHECK(regrouped.rows[i].n_codes == ipc.rows[i].n_codes);
  }
}

TEST_CASE("describe: degenerate all-equal distribution") {
  FrequencyDistribution dist{1978, Scheme::ipc, {{"A", 1}, {"B", 1}, {"C", 1}}};
  const DescriptiveStats stats = describe(dist);
  CHECK(stats.mean == 1.0);
  CHECK(stats.variance == 0.0);
  CHECK(stats.cv == 0.0);
  CHECK_FALSE(stats.skewness.has_value());
  CHECK_FALSE(stats.kurtosis.has_value());
}

TEST_CASE("describe: hand-computed population moments of y=(1,1,2)") {
  FrequencyDistribution dist{1978, Scheme::ipc, {{"A", 1}, {"B", 1}, {"C", 2}}};
  const DescriptiveStats stats = describe(dist);
  CHECK(stats.mean == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(stats.max == 2.0);
  CHECK(stats.variance == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(stats.cv == doctest::Approx(std::sqrt(2.0 / 9.0) / (4.0 / 3.0)).epsilon(1e-12));
  CHECK(stats.cv == doctest::Approx(0.35355339059).epsilon(1e-9));
  // m3 = (2*(-1/3)^3 + (2/3)^3)/3 = 2/27 over m2^1.5
  const double m3 = (2.0 * std::pow(-1.0 / 3.0, 3) + std::pow(2.0 / 3.0, 3)) / 3.0;
  const double m4 = (2.0 * std::pow(1.0 / 3.0, 4) + std::pow(2.0 / 3.0, 4)) / 3.0;
  CHECK(*stats.skewness == doctest::Approx(m3 / std::pow(2.0 / 9.0, 1.5)).epsilon(1e-12));
  CHECK(*stats.kurtosis == doctest::Approx(m4 / std::pow(2.0 / 9.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("describe: 1978 IPC fixture mean and grouped/ungrouped agreement") {
  const GroupedFrequencyTable table = make_table(oracle::table1_ipc_1978());
  const DescriptiveStats grouped = describe(table);
  CHECK(grouped.mean == doctest::Approx(5068.0 / 3979.0).epsilon(1e-12));
  CHECK(grouped.mean == doctest::Approx(1.2737).epsilon(1e-4));
  const DescriptiveStats ungrouped = describe(expand_table(table));
  CHECK(grouped.variance == doctest::Approx(ungrouped.variance).epsilon(1e-12));
  CHECK(*grouped.skewness == doctest::Approx(*ungrouped.skewness).epsilon(1e-12));
  CHECK(*grouped.kurtosis == doctest::Approx(*ungrouped.kurtosis).epsilon(1e-12));
  CHECK(grouped.max == 18.0);
  CHECK(describe(table).mean >= 1.0);
  CHECK_THROWS_AS(describe(FrequencyDistribution{}), std::invalid_argument);
}

TEST_CASE("moment inequality holds on random distributions") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto counts = oracle::random_counts(rng, 200, 50);
    FrequencyDistribution dist;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      dist.counts["c" + std::to_string(i)] = counts[i];
    }
    const DescriptiveStats stats = describe(dist);
    CHECK(stats.max >= stats.mean);
    CHECK(stats.mean >= 1.0);
    CHECK(stats.variance >= 0.0);
    if (stats.skewness) {
      CHECK(*stats.kurtosis >= *stats.skewness * *stats.skewness + 1.0 - 1e-9);
    }
  }
}

TEST_CASE("round trip: anonymous expansion preserves every downstream measure") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const auto counts = oracle::random_counts(rng, 300, 40);
    FrequencyDistribution dist;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      dist.counts["code" + std::to_string(i)] = counts[i];
    }
    const GroupedFrequencyTable table = group_table(dist);
    const FrequencyDistribution rebuilt = expand_table(table);
    CHECK(measure(dist).gini == doctest::Approx(measure(rebuilt).gini).epsilon(1e-15));
    CHECK(measure(dist).theil == doctest::Approx(measure(rebuilt).theil).epsilon(1e-15));
    const DescriptiveStats a = describe(dist);
    const DescriptiveStats b = describe(rebuilt);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-14));
  }
}

TEST_CASE("permutation invariance and conservation") {
  std::mt19937_64 rng(31);
  std::vector<PatentCodeEvent> events;
  for (int i = 0; i < 500; ++i) {
    events.push_back({"P" + std::to_string(i), 1990 + i % 3, i % 2 == 0 ? Scheme::ipc : Scheme::cpc,
                      "C" + std::to_string(i % 37)});
  }
  auto base = build_distributions(events);
  std::uint64_t total = 0;
  for (const auto& [key, dist] : base) total += dist.total_uses();
  CHECK(total == events.size());

  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(events.begin(), events.end(), rng);
    auto shuffled = build_distributions(events);
    REQUIRE(shuffled.size() == base.size());
    for (const auto& [key, dist] : base) {
      CHECK(shuffled.at(key).counts == dist.counts);
    }
  }
}
