#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace patineq {

std::string_view trim(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

/// Canonical form of a classification symbol: trimmed, internal whitespace
/// runs collapsed to a single space, ASCII-uppercased. "c07c  5/00 " and
/// "C07C 5/00" map to the same key.
std::string normalize_code(std::string_view raw);

/// Strict base-10 parse of a 4-digit calendar year. Rejects signs,
/// surrounding garbage and anything outside [1000, 9999].
std::optional<int> parse_year(std::string_view field);

/// Shortest round-trippable decimal form, up to 12 significant digits.
/// Used for every floating-point column so outputs are byte-stable.
std::string format_double(double v);

/// 2-decimal fixed formatting (percent shares and the like).
std::string format_fixed2(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string digest_hex(std::uint64_t digest);

}  // namespace patineq
