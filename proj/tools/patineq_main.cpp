#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patineq/pipeline.hpp"
#include "patineq/synthetic.hpp"
#include "patineq/text.hpp"
#include "patineq/types.hpp"

namespace {

using patineq::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CliState {
  RunConfig config;
  std::string schemes = "ipc,cpc";
  std::string delimiter;

  // synth profile
  patineq::SyntheticProfile profile;
  std::uint64_t seed = 1;
};

/// --schemes "ipc,cpc" -> the two booleans; empty result is a usage error.
bool apply_schemes(CliState& state) {
  state.config.scheme_ipc = false;
  state.config.scheme_cpc = false;
  std::string_view rest = state.schemes;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view token = patineq::trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (token.empty()) continue;
    const auto scheme = patineq::scheme_from_string(token);
    if (!scheme) {
      std::cerr << "unknown scheme '" << token << "' (expected ipc and/or cpc)\n";
      return false;
    }
    (*scheme == patineq::Scheme::ipc ? state.config.scheme_ipc : state.config.scheme_cpc) = true;
  }
  if (!state.config.scheme_ipc && !state.config.scheme_cpc) {
    std::cerr << "--schemes selected nothing\n";
    return false;
  }
  return true;
}

bool apply_delimiter(CliState& state) {
  if (state.delimiter.empty()) return true;
  if (state.delimiter == "tab" || state.delimiter == "\\t") {
    state.config.delimiter = '\t';
    return true;
  }
  if (state.delimiter.size() == 1) {
    state.config.delimiter = state.delimiter[0];
    return true;
  }
  std::cerr << "--delimiter expects a single character (or 'tab')\n";
  return false;
}

void add_config_flag(CLI::App* cmd) {
  cmd->set_config("--config", "", "Key=value config file; command-line flags take precedence");
}

void add_input_options(CLI::App* cmd, CliState& state, bool need_concordance) {
  cmd->add_option("--ipc", state.config.ipc_file, "IPC file (pct_nbr, prio_year, app_year, IPC)");
  cmd->add_option("--app-reg", state.config.app_reg_file,
                  "Application register file (pct_nbr, appln_id)");
  cmd->add_option("--cpc", state.config.cpc_file, "CPC file (appln_id, CPC)");
  if (need_concordance) {
    cmd->add_option("--concordance", state.config.concordance_file,
                    "IPC->NACE concordance file (ipc_prefix, nace_division)");
  }
  cmd->add_option("--delimiter", state.delimiter,
                  "Input delimiter (default: sniffed among , ; | tab)");
  cmd->add_option("--threads", state.config.threads, "Parser thread count")
      ->capture_default_str();
}

void add_window_options(CLI::App* cmd, CliState& state) {
  cmd->add_option("--from", state.config.year_start, "First priority year (inclusive)")
      ->capture_default_str();
  cmd->add_option("--to", state.config.year_end, "Last priority year (inclusive)")
      ->capture_default_str();
  cmd->add_option("--schemes", state.schemes, "Schemes to process: ipc, cpc or ipc,cpc")
      ->capture_default_str();
}

void add_out_option(CLI::App* cmd, CliState& state) {
  cmd->add_option("--out", state.config.out_dir, "Output directory")->capture_default_str();
}

int finish_config(CliState& state) {
  if (!apply_schemes(state) || !apply_delimiter(state)) return kExitUsage;
  if (state.config.year_start > state.config.year_end) {
    std::cerr << "usage error: --from " << state.config.year_start << " is after --to "
              << state.config.year_end << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

void print_written(const std::vector<std::filesystem::path>& files) {
  for (const auto& path : files) std::cout << "wrote " << path.string() << "\n";
}

int guarded(const std::function<void()>& action) {
  try {
    action();
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inequality analytics for patent technology-code use frequency"};
  app.set_version_flag("--version", std::string(patineq::kVersion));
  app.require_subcommand(1);

  CliState state;

  CLI::App* validate = app.add_subcommand("validate", "Check inputs and configuration");
  CLI::App* ingest = app.add_subcommand("ingest", "Parse and join inputs into canonical events");
  CLI::App* freq = app.add_subcommand("freq", "Per-year use-frequency tables and moments");
  CLI::App* ineq = app.add_subcommand("ineq", "Gini/Theil time series");
  CLI::App* lorenz = app.add_subcommand("lorenz", "Lorenz curve dumps for selected years");
  CLI::App* classify = app.add_subcommand("classify", "IPC->NACE classification audit");
  CLI::App* decomp = app.add_subcommand("decomp", "Within/between Theil decomposition series");
  CLI::App* rank = app.add_subcommand("rank", "Per-year NACE division rankings");
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic fixture files");
  CLI::App* run = app.add_subcommand("run", "Full pipeline: ingest through decomposition");

  for (CLI::App* cmd : {validate, ingest, freq, ineq, lorenz, classify, decomp, rank, run}) {
    const bool concordance = cmd == validate || cmd == classify || cmd == decomp ||
                             cmd == rank || cmd == run;
    add_config_flag(cmd);
    add_input_options(cmd, state, concordance);
    add_window_options(cmd, state);
  }
  for (CLI::App* cmd : {ingest, freq, ineq, lorenz, classify, decomp, rank, run}) {
    add_out_option(cmd, state);
  }
  for (CLI::App* cmd : {lorenz, run}) {
    cmd->add_option("--lorenz-years", state.config.lorenz_years,
                    "Years to dump Lorenz curves for")
        ->delimiter(',');
  }
  for (CLI::App* cmd : {classify, decomp, rank, run}) {
    cmd->add_option("--split-dual", state.config.split_dual,
                    "Count dual-classified codes as two identities")
        ->capture_default_str();
  }
  for (CLI::App* cmd : {freq, run}) {
    cmd->add_flag("--freq-per-cell", state.config.freq_per_cell,
                  "One frequency file per (year, scheme) instead of one combined file");
  }

  add_config_flag(synth);
  synth->add_option("--seed", state.seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", state.config.out_dir, "Output directory")->required();
  synth->add_option("--patents", state.profile.patents, "Number of patents")
      ->capture_default_str();
  synth->add_option("--from", state.profile.year_start, "First priority year")
      ->capture_default_str();
  synth->add_option("--to", state.profile.year_end, "Last priority year")
      ->capture_default_str();
  synth->add_option("--mean-codes", state.profile.mean_codes_per_patent,
                    "Mean codes per patent (>= 1)")
      ->capture_default_str();
  synth->add_option("--skew", state.profile.popularity_skew,
                    "Code popularity Zipf exponent (0 = uniform)")
      ->capture_default_str();
  synth->add_option("--ipc-universe", state.profile.ipc_universe, "Distinct IPC codes")
      ->capture_default_str();
  synth->add_option("--cpc-universe", state.profile.cpc_universe, "Distinct CPC codes")
      ->capture_default_str();
  synth->add_option("--dup-rate", state.profile.duplicate_row_rate,
                    "Fraction of rows written twice (pipeline must collapse them)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (synth->parsed()) {
    if (state.profile.year_start > state.profile.year_end) {
      std::cerr << "usage error: --from is after --to\n";
      return kExitUsage;
    }
    return guarded([&] {
      const patineq::SyntheticOutput files =
          patineq::generate_synthetic(state.config.out_dir, state.seed, state.profile);
      print_written({files.ipc_file, files.app_reg_file, files.cpc_file,
                     files.concordance_file, files.truth_freq_file});
    });
  }

  if (const int rc = finish_config(state); rc != kExitOk) return rc;

  if (validate->parsed()) {
    const patineq::Diagnostics diag = patineq::validate(state.config);
    for (const patineq::Diagnostic& d : diag.items) {
      const char* tag = d.severity == patineq::Diagnostic::Severity::error     ? "error"
                        : d.severity == patineq::Diagnostic::Severity::warning ? "warning"
                                                                               : "info";
      std::cout << tag << ": " << d.message << "\n";
    }
    return diag.ok() ? kExitOk : kExitFailure;
  }
  if (ingest->parsed()) {
    return guarded([&] { print_written(patineq::run_ingest_stage(state.config)); });
  }
  if (freq->parsed()) {
    return guarded([&] { print_written(patineq::run_freq_stage(state.config)); });
  }
  if (ineq->parsed()) {
    return guarded([&] { print_written(patineq::run_ineq_stage(state.config)); });
  }
  if (lorenz->parsed()) {
    return guarded([&] { print_written(patineq::run_lorenz_stage(state.config)); });
  }
  if (classify->parsed()) {
    return guarded([&] { print_written(patineq::run_classify_stage(state.config)); });
  }
  if (decomp->parsed()) {
    return guarded([&] { print_written(patineq::run_decomp_stage(state.config)); });
  }
  if (rank->parsed()) {
    return guarded([&] { print_written(patineq::run_rank_stage(state.config)); });
  }
  if (run->parsed()) {
    return guarded([&] {
      patineq::run(state.config);
      std::cout << "wrote " << (state.config.out_dir / "manifest.json").string() << "\n";
    });
  }
  return kExitUsage;
}
