#include "patineq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "patineq/concordance.hpp"
#include "patineq/frequency.hpp"
#include "patineq/pipeline.hpp"
#include "patineq/types.hpp"

namespace patineq {

namespace {

// Sampling is built on raw mt19937_64 draws only; the standard fixes that
// engine bit-for-bit, so generated files are identical across platforms.
std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t poisson_knuth(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform_unit(rng);
  } while (p > limit);
  return k - 1;
}

std::string make_symbol(std::mt19937_64& rng, bool cpc) {
  char buf[24];
  const char* sections = cpc ? "ABCDEFGHY" : "ABCDEFGH";
  const char section = sections[uniform_u64(rng, cpc ? 9 : 8)];
  const int cls = 1 + static_cast<int>(uniform_u64(rng, 99));
  const char sub = static_cast<char>('A' + uniform_u64(rng, 26));
  const int group = 1 + static_cast<int>(uniform_u64(rng, 99));
  const int subgroup = 2 * static_cast<int>(uniform_u64(rng, 50));
  std::snprintf(buf, sizeof(buf), "%c%02d%c %d/%02d", section, cls, sub, group, subgroup);
  return buf;
}

std::vector<std::string> build_universe(std::mt19937_64& rng, std::size_t size, bool cpc) {
  std::vector<std::string> codes;
  std::set<std::string> seen;
  if (!cpc) {
    // Seed the dual-classification material so end-to-end runs hit the
    // context rule: trigger subclasses, C12M, context and plain A61K.
    for (const char* code :
         {"C07B 1/00", "C07C 5/00", "C07F 9/00", "C07G 3/00", "C12S 11/00", "C40B 40/00",
          "C12M 1/00", "A61K 8/02", "A61K 8/97", "A61K 9/00"}) {
      codes.emplace_back(code);
      seen.insert(code);
    }
  }
  while (codes.size() < size) {
    std::string code = make_symbol(rng, cpc);
    if (seen.insert(code).second) codes.push_back(std::move(code));
  }
  return codes;
}

/// Cumulative Zipf weights over universe order: w_i = (i+1)^-skew.
std::vector<double> cumulative_weights(std::size_t size, double skew) {
  std::vector<double> cum(size);
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    total += std::pow(static_cast<double>(i + 1), -skew);
    cum[i] = total;
  }
  return cum;
}

std::size_t draw_weighted(std::mt19937_64& rng, const std::vector<double>& cum) {
  const double u = uniform_unit(rng) * cum.back();
  return std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
}

std::vector<std::size_t> draw_distinct(std::mt19937_64& rng, const std::vector<double>& cum,
                                       std::size_t k) {
  std::set<std::size_t> picked;
  while (picked.size() < k) picked.insert(draw_weighted(rng, cum));
  return {picked.begin(), picked.end()};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

void write_concordance(const std::filesystem::path& path,
                       const std::vector<std::string>& ipc_universe) {
  // Map every 6th subclass to Co_IPC implicitly by leaving it out; spread
  // the rest round-robin over the real divisions. The conditional rule
  // owns the dual subclasses regardless of their table entries.
  std::set<std::string> subclasses;
  for (const std::string& code : ipc_universe) {
    std::string_view sub = ipc_subclass(code);
    if (!sub.empty()) subclasses.insert(std::string(sub));
  }
  const std::vector<Division>& divisions = known_divisions();
  std::ofstream out = open_out(path);
  out << "ipc_prefix,nace_division\n";
  std::size_t i = 0;
  for (const std::string& sub : subclasses) {
    ++i;
    if (i % 6 == 0) continue;  // falls through to Co_IPC
    out << sub << ',' << divisions[i % 26] << '\n';
  }
  // One deeper entry so longest-prefix matching is exercised end to end.
  out << "A61K 9/,26\n";
}

}  // namespace

SyntheticOutput generate_synthetic(const std::filesystem::path& out_dir, std::uint64_t seed,
                                   const SyntheticProfile& profile) {
  if (profile.patents == 0) throw std::invalid_argument("synthetic: patents must be positive");
  if (profile.year_start > profile.year_end) {
    throw std::invalid_argument("synthetic: year_start after year_end");
  }
  if (profile.mean_codes_per_patent < 1.0) {
    throw std::invalid_argument("synthetic: mean codes per patent must be >= 1");
  }
  std::filesystem::create_directories(out_dir);

  std::mt19937_64 rng(seed);
  const std::vector<std::string> ipc_codes = build_universe(rng, profile.ipc_universe, false);
  const std::vector<std::string> cpc_codes = build_universe(rng, profile.cpc_universe, true);
  const std::vector<double> ipc_cum = cumulative_weights(ipc_codes.size(), profile.popularity_skew);
  const std::vector<double> cpc_cum = cumulative_weights(cpc_codes.size(), profile.popularity_skew);

  SyntheticOutput files;
  files.ipc_file = out_dir / "ipc.psv";
  files.app_reg_file = out_dir / "app_reg.psv";
  files.cpc_file = out_dir / "cpc.psv";
  files.concordance_file = out_dir / "concordance.csv";
  files.truth_freq_file = out_dir / "truth_freq.tsv";

  std::ofstream ipc_out = open_out(files.ipc_file);
  std::ofstream reg_out = open_out(files.app_reg_file);
  std::ofstream cpc_out = open_out(files.cpc_file);
  ipc_out << "pct_nbr|prio_year|app_year|IPC\n";
  reg_out << "pct_nbr|appln_id\n";
  cpc_out << "appln_id|CPC\n";

  const std::uint64_t span = static_cast<std::uint64_t>(profile.year_end - profile.year_start) + 1;
  const double extra_mean = profile.mean_codes_per_patent - 1.0;

  std::map<YearScheme, FrequencyDistribution> truth;
  auto tally = [&truth](int year, Scheme scheme, const std::string& code) {
    FrequencyDistribution& dist = truth[{year, scheme}];
    if (dist.counts.empty()) {
      dist.year = year;
      dist.scheme = scheme;
    }
    ++dist.counts[code];
  };
  auto maybe_duplicate = [&](std::ofstream& out, const std::string& row) {
    out << row;
    if (profile.duplicate_row_rate > 0.0 && uniform_unit(rng) < profile.duplicate_row_rate) {
      out << row;
    }
  };

  char patent_id[24];
  char appln_id[24];
  for (std::uint64_t p = 0; p < profile.patents; ++p) {
    std::snprintf(patent_id, sizeof(patent_id), "WO%07llu",
                  static_cast<unsigned long long>(p + 1));
    std::snprintf(appln_id, sizeof(appln_id), "EP%07llu",
                  static_cast<unsigned long long>(p + 1));
    const int year = profile.year_start + static_cast<int>(uniform_u64(rng, span));

    const std::size_t k_ipc = static_cast<std::size_t>(
        std::min<std::uint64_t>(1 + poisson_knuth(rng, extra_mean), ipc_codes.size()));
    for (std::size_t idx : draw_distinct(rng, ipc_cum, k_ipc)) {
      const std::string& code = ipc_codes[idx];
      maybe_duplicate(ipc_out, std::string(patent_id) + '|' + std::to_string(year) + '|' +
                                   std::to_string(year + 1) + '|' + code + '\n');
      tally(year, Scheme::ipc, code);
    }

    maybe_duplicate(reg_out, std::string(patent_id) + '|' + appln_id + '\n');

    const std::size_t k_cpc = static_cast<std::size_t>(
        std::min<std::uint64_t>(1 + poisson_knuth(rng, extra_mean), cpc_codes.size()));
    for (std::size_t idx : draw_distinct(rng, cpc_cum, k_cpc)) {
      const std::string& code = cpc_codes[idx];
      maybe_duplicate(cpc_out, std::string(appln_id) + '|' + code + '\n');
      tally(year, Scheme::cpc, code);
    }
  }

  write_concordance(files.concordance_file, ipc_codes);
  std::ofstream truth_out = open_out(files.truth_freq_file);
  write_freq_long(truth_out, truth);
  return files;
}

}  // namespace patineq
