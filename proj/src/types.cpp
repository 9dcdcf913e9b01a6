#include "patineq/types.hpp"

#include "patineq/text.hpp"

namespace patineq {

std::string_view to_string(Scheme s) { return s == Scheme::ipc ? "IPC" : "CPC"; }

std::optional<Scheme> scheme_from_string(std::string_view text) {
  if (iequals(text, "IPC")) return Scheme::ipc;
  if (iequals(text, "CPC")) return Scheme::cpc;
  return std::nullopt;
}

}  // namespace patineq
