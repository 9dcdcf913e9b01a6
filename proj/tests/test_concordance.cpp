#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "patineq/concordance.hpp"

using namespace patineq;

namespace {

ConcordanceTable mini_table() {
  // Covers the subclasses named by the dual rule plus a default route.
  const std::vector<std::pair<std::string, std::string>> entries = {
      {"C07C", "21"}, {"C07B", "21"}, {"C12M", "21"}, {"A61K", "21"},
      {"A01B", "10"}, {"B02C", "28"}, {"A01B 1/", "11"},
  };
  return ConcordanceTable::from_entries(entries);
}

PatentCodeEvent ipc_event(const std::string& patent, const std::string& code, int year = 2000) {
  return {patent, year, Scheme::ipc, code};
}

std::vector<ClassifiedEvent> classify_patent(const std::vector<PatentCodeEvent>& events) {
  return classify(events, mini_table(), ConditionalRule{});
}

Division division_of(const std::vector<ClassifiedEvent>& classified, const std::string& code) {
  for (const ClassifiedEvent& ce : classified) {
    if (ce.event.code == code) return ce.division;
  }
  FAIL("code not classified: " << code);
  return {};
}

}  // namespace

TEST_CASE("known division labels are the 27 of the partition") {
  CHECK(known_divisions().size() == 27);
  CHECK(is_known_division("10"));
  CHECK(is_known_division("32"));
  CHECK(is_known_division("42"));
  CHECK(is_known_division("62"));
  CHECK(is_known_division("Co_IPC"));
  CHECK_FALSE(is_known_division("33"));
  CHECK_FALSE(is_known_division("99"));
}

TEST_CASE("load accepts valid rows and normalizes prefixes") {
  std::istringstream in("ipc_prefix,nace_division\nC07C,21\n  a01b ,10\n");
  const ConcordanceTable table = ConcordanceTable::load(in);
  CHECK(table.size() == 2);
  CHECK(table.lookup("C07C 5/00") == "21");
  CHECK(table.lookup("A01B 1/00") == "10");
}

TEST_CASE("load rejects unknown division labels, naming the row") {
  std::istringstream in("ipc_prefix,nace_division\nC07C,99\n");
  try {
    ConcordanceTable::load(in);
    FAIL("expected ConcordanceError");
  } catch (const ConcordanceError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("99") != std::string::npos);
    CHECK(msg.find("C07C") != std::string::npos);
  }
}

TEST_CASE("load rejects an empty table and conflicting duplicates") {
  std::istringstream empty("ipc_prefix,nace_division\n");
  CHECK_THROWS_AS(ConcordanceTable::load(empty), ConcordanceError);

  std::istringstream conflict("ipc_prefix,nace_division\nC07C,21\nC07C,20\n");
  CHECK_THROWS_AS(ConcordanceTable::load(conflict), ConcordanceError);

  // A repeated identical row is tolerated.
  std::istringstream repeat("ipc_prefix,nace_division\nC07C,21\nC07C,21\n");
  CHECK(ConcordanceTable::load(repeat).size() == 1);
}

TEST_CASE("longest-prefix match resolves nested entries; Co_IPC is the fallback") {
  const ConcordanceTable table = mini_table();
  CHECK(table.lookup("A01B 1/00") == "11");  // group entry beats subclass entry
  CHECK(table.lookup("A01B 2/00") == "10");
  CHECK(table.lookup("H99Z 1/00") == std::string(kCoIpc));
}

TEST_CASE("A61K 8/ context group matching accepts both spellings") {
  CHECK(in_context_group("A61K 8/02"));
  CHECK(in_context_group("A61K8/02"));
  CHECK(in_context_group("A61K008/02"));
  CHECK(in_context_group("A61K 0008/97"));
  CHECK(in_context_group("A61K 8"));
  CHECK_FALSE(in_context_group("A61K 9/00"));
  CHECK_FALSE(in_context_group("A61K 80/00"));
  CHECK_FALSE(in_context_group("A61K 88/00"));
  CHECK_FALSE(in_context_group("A61L 8/00"));
  CHECK_FALSE(in_context_group("C07C 5/00"));
}

TEST_CASE("ipc_subclass extraction") {
  CHECK(ipc_subclass("C07C 5/00") == "C07C");
  CHECK(ipc_subclass("C07C") == "C07C");
  CHECK(ipc_subclass("C07") == "");
  CHECK(ipc_subclass("1234") == "");
  CHECK(ipc_subclass("") == "");
}

TEST_CASE("conditional rule: the three worked examples") {
  SUBCASE("C07C together with A61K 8/ -> NACE 20") {
    const auto classified =
        classify_patent({ipc_event("P1", "C07C 5/00"), ipc_event("P1", "A61K 8/02")});
    CHECK(division_of(classified, "C07C 5/00") == "20");
    for (const ClassifiedEvent& ce : classified) CHECK(ce.context_flag);
  }
  SUBCASE("C12M alone -> NACE 21") {
    const auto classified = classify_patent({ipc_event("P2", "C12M 1/00")});
    CHECK(division_of(classified, "C12M 1/00") == "21");
    CHECK_FALSE(classified[0].context_flag);
  }
  SUBCASE("C12M together with A61K 8/ -> NACE 32") {
    const auto classified =
        classify_patent({ipc_event("P3", "C12M 1/00"), ipc_event("P3", "A61K 8/02")});
    CHECK(division_of(classified, "C12M 1/00") == "32");
  }
  SUBCASE("every trigger subclass routes to 20 with context, 21 without") {
    for (const std::string code : {"C07B 1/00", "C07C 5/00", "C07F 9/00", "C07G 3/00",
                                   "C12S 11/00", "C40B 40/00"}) {
      const auto with = classify_patent({ipc_event("P4", code), ipc_event("P4", "A61K 8/02")});
      CHECK(division_of(with, code) == "20");
      const auto without = classify_patent({ipc_event("P5", code)});
      CHECK(division_of(without, code) == "21");
    }
  }
  SUBCASE("the context code itself is classified by the table") {
    const auto classified = classify_patent({ipc_event("P6", "A61K 8/02")});
    CHECK(division_of(classified, "A61K 8/02") == "21");
  }
}

TEST_CASE("classify_all groups by patent and ignores CPC events") {
  std::vector<PatentCodeEvent> events = {
      ipc_event("P2", "C07C 5/00"),
      {"P2", 2000, Scheme::cpc, "Y02E 10/50"},
      ipc_event("P1", "C07C 5/00"),
      ipc_event("P2", "A61K 8/02"),
  };
  const auto classified = classify_all(events, mini_table(), ConditionalRule{});
  REQUIRE(classified.size() == 3);  // CPC event dropped
  CHECK(division_of(classified, "A61K 8/02") == "21");
  // P1 has no context; P2 does.
  for (const ClassifiedEvent& ce : classified) {
    if (ce.event.patent_id == "P1") {
      CHECK(ce.division == "21");
      CHECK_FALSE(ce.context_flag);
    }
    if (ce.event.patent_id == "P2" && ce.event.code == "C07C 5/00") {
      CHECK(ce.division == "20");
      CHECK(ce.context_flag);
    }
  }
}

TEST_CASE("classification is independent of event order") {
  std::mt19937_64 rng(73);
  std::vector<PatentCodeEvent> events;
  for (int p = 0; p < 40; ++p) {
    const std::string patent = "P" + std::to_string(p);
    events.push_back(ipc_event(patent, "C07C 5/00"));
    if (p % 3 == 0) events.push_back(ipc_event(patent, "A61K 8/02"));
    if (p % 4 == 0) events.push_back(ipc_event(patent, "A01B 1/00"));
  }
  auto sorted_events = [](std::vector<ClassifiedEvent> v) {
    std::sort(v.begin(), v.end(), [](const ClassifiedEvent& a, const ClassifiedEvent& b) {
      return std::tie(a.event, a.division) < std::tie(b.event, b.division);
    });
    return v;
  };
  const auto base = sorted_events(classify_all(events, mini_table(), ConditionalRule{}));
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(events.begin(), events.end(), rng);
    const auto shuffled = sorted_events(classify_all(events, mini_table(), ConditionalRule{}));
    REQUIRE(shuffled.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(shuffled[i].event == base[i].event);
      CHECK(shuffled[i].division == base[i].division);
      CHECK(shuffled[i].context_flag == base[i].context_flag);
    }
  }
}

TEST_CASE("partition: split mode gives a dual code two identities") {
  // C07C used by 3 patents with context and 2 without.
  std::vector<PatentCodeEvent> events;
  for (int p = 0; p < 3; ++p) {
    const std::string patent = "ctx" + std::to_string(p);
    events.push_back(ipc_event(patent, "C07C 5/00"));
    events.push_back(ipc_event(patent, "A61K 8/02"));
  }
  for (int p = 0; p < 2; ++p) {
    events.push_back(ipc_event("plain" + std::to_string(p), "C07C 5/00"));
  }
  const auto classified = classify_all(events, mini_table(), ConditionalRule{});

  const PartitionedDistribution split = partition(classified, 2000, true);
  REQUIRE(split.subsets.count("20") == 1);
  REQUIRE(split.subsets.count("21") == 1);
  CHECK(split.subsets.at("20").total_uses() == 3);
  CHECK(split.subsets.at("20").code_count() == 1);
  // NACE 21 holds the plain C07C identity (2 uses) and the A61K codes (3).
  CHECK(split.subsets.at("21").counts.at("C07C 5/00") == 2);
  CHECK(split.total_uses() == classified.size());

  const PartitionedDistribution merged = partition(classified, 2000, false);
  // Majority is context (3 > 2): all five uses of C07C 5/00 under NACE 20.
  CHECK(merged.subsets.at("20").counts.at("C07C 5/00") == 5);
  CHECK(merged.total_uses() == classified.size());
}

TEST_CASE("partition: unsplit ties go to NACE 21") {
  std::vector<PatentCodeEvent> events;
  for (int p = 0; p < 2; ++p) {
    const std::string patent = "ctx" + std::to_string(p);
    events.push_back(ipc_event(patent, "C12M 1/00"));
    events.push_back(ipc_event(patent, "A61K 8/02"));
  }
  for (int p = 0; p < 2; ++p) {
    events.push_back(ipc_event("plain" + std::to_string(p), "C12M 1/00"));
  }
  const auto classified = classify_all(events, mini_table(), ConditionalRule{});
  const PartitionedDistribution merged = partition(classified, 2000, false);
  CHECK(merged.subsets.at("21").counts.at("C12M 1/00") == 4);
}

TEST_CASE("partition: single-division and error cases") {
  const std::vector<PatentCodeEvent> events = {ipc_event("P1", "A01B 2/00"),
                                               ipc_event("P2", "A01B 2/00")};
  const auto classified = classify_all(events, mini_table(), ConditionalRule{});
  const PartitionedDistribution part = partition(classified, 2000, true);
  CHECK(part.subsets.size() == 1);
  CHECK(part.total_uses() == 2);

  auto mixed = classified;
  mixed[0].event.year = 1999;
  CHECK_THROWS_AS(partition(mixed, 2000, true), std::invalid_argument);
}

TEST_CASE("partition conservation on random fixtures, both modes") {
  std::mt19937_64 rng(79);
  const ConcordanceTable table = mini_table();
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<PatentCodeEvent> events;
    const int patents = 1 + static_cast<int>(rng() % 60);
    for (int p = 0; p < patents; ++p) {
      const std::string patent = "P" + std::to_string(p);
      const char* pool[] = {"C07C 5/00",  "C12M 1/00", "A61K 8/02", "A61K 9/00",
                            "A01B 1/00",  "A01B 2/00", "B02C 3/00", "H99Z 1/00",
                            "C40B 40/00", "C07F 9/00"};
      const int k = 1 + static_cast<int>(rng() % 4);
      std::set<int> chosen;
      while (static_cast<int>(chosen.size()) < k) chosen.insert(rng() % 10);
      for (int idx : chosen) events.push_back(ipc_event(patent, pool[idx]));
    }
    const auto classified = classify_all(events, table, ConditionalRule{});
    for (bool split_dual : {true, false}) {
      const PartitionedDistribution part = partition(classified, 2000, split_dual);
      CHECK(part.total_uses() == classified.size());
      for (const auto& [division, dist] : part.subsets) {
        CHECK(is_known_division(division));
        for (const auto& [code, count] : dist.counts) CHECK(count >= 1);
      }
      // identities are disjoint across subsets
      std::set<std::string> seen;
      std::uint64_t identities = 0;
      for (const auto& [division, dist] : part.subsets) {
        identities += dist.counts.size();
        for (const auto& [code, count] : dist.counts) seen.insert(code);
      }
      CHECK(seen.size() == identities);
    }
  }
}

TEST_CASE("partition_by_year splits on event years") {
  std::vector<PatentCodeEvent> events = {
      ipc_event("P1", "A01B 2/00", 1999),
      ipc_event("P2", "A01B 2/00", 2000),
      ipc_event("P3", "B02C 3/00", 2000),
  };
  const auto classified = classify_all(events, mini_table(), ConditionalRule{});
  const auto by_year = partition_by_year(classified, true);
  REQUIRE(by_year.size() == 2);
  CHECK(by_year.at(1999).total_uses() == 1);
  CHECK(by_year.at(2000).total_uses() == 2);
}

TEST_CASE("division_use_totals and percent_share reproduce the share arithmetic") {
  CHECK(percent_share(3578270, 13615554) == doctest::Approx(26.28).epsilon(1e-12));
  CHECK(percent_share(4619, 13615554) == doctest::Approx(0.03).epsilon(1e-9));
  const std::vector<PatentCodeEvent> events = {
      ipc_event("P1", "A01B 2/00"), ipc_event("P2", "A01B 2/00"), ipc_event("P3", "H99Z 1/00"),
      ipc_event("P4", "B02C 3/00")};
  const auto classified = classify_all(events, mini_table(), ConditionalRule{});
  const auto totals = division_use_totals(classified);
  CHECK(totals.at("10") == 2);
  CHECK(totals.at("28") == 1);
  CHECK(totals.at(std::string(kCoIpc)) == 1);
}
