#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace patineq {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Scheme : std::uint8_t { ipc = 0, cpc = 1 };

inline constexpr std::size_t kSchemeCount = 2;

std::string_view to_string(Scheme s);
std::optional<Scheme> scheme_from_string(std::string_view text);

/// Small fixed pair of per-scheme values (counters, totals, ...).
template <typename T>
struct PerScheme {
  T ipc{};
  T cpc{};

  T& operator[](Scheme s) { return s == Scheme::ipc ? ipc : cpc; }
  const T& operator[](Scheme s) const { return s == Scheme::ipc ? ipc : cpc; }
  bool operator==(const PerScheme&) const = default;
};

/// One observed use of a technology code: a patent, its priority year, and
/// one classification symbol. The ingest stage guarantees codes are
/// normalized and that a (patent_id, scheme, code) triple appears once.
struct PatentCodeEvent {
  std::string patent_id;
  int year = 0;
  Scheme scheme = Scheme::ipc;
  std::string code;

  auto operator<=>(const PatentCodeEvent&) const = default;
};

}  // namespace patineq
