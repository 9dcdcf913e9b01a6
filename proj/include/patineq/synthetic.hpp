#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace patineq {

/// Shape of a generated desk-scale dataset. The code universes are seeded
/// with the dual-classification subclasses and A61K 8/ context codes so an
/// end-to-end run exercises the conditional rule.
struct SyntheticProfile {
  std::uint64_t patents = 1000;
  int year_start = 1977;
  int year_end = 2018;
  double mean_codes_per_patent = 4.0;  // >= 1
  double popularity_skew = 1.0;        // Zipf exponent; 0 = uniform
  std::size_t ipc_universe = 400;
  std::size_t cpc_universe = 600;
  /// Fraction of file rows emitted twice; the pipeline must collapse them.
  double duplicate_row_rate = 0.0;
};

struct SyntheticOutput {
  std::filesystem::path ipc_file;
  std::filesystem::path app_reg_file;
  std::filesystem::path cpc_file;
  std::filesystem::path concordance_file;
  /// Expected frequency tables computed by construction, in the exact
  /// format of the pipeline's combined frequency output.
  std::filesystem::path truth_freq_file;
};

/// Writes the three input files, a covering concordance and the ground
/// truth sidecar under out_dir. Identical (seed, profile) pairs produce
/// byte-identical files.
SyntheticOutput generate_synthetic(const std::filesystem::path& out_dir, std::uint64_t seed,
                                   const SyntheticProfile& profile);

}  // namespace patineq
