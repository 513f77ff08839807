#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nsdm/core.hpp"

namespace nsdm::cli {

/// Command-line overrides applied on top of the config document.
struct Overrides {
  std::optional<double> tol_subgrad;
  std::optional<std::size_t> max_iters;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  bool timing = false;
};

/// Exit codes shared by all subcommands:
///   0 terminated at tolerance / exact zero subgradient, or all checks passed
///   1 usage or config error (also invalid certificate/problem pairings)
///   2 iteration budget exhausted
///   3 at least one requested certificate failed (report still written)
///   4 line-search stall
int cmd_run(const std::string& config_path, const Overrides& ov = {});
int cmd_verify(const std::string& config_path, const Overrides& ov = {});
int cmd_bench(const std::string& config_path, const Overrides& ov = {});

/// argv-level entry point used by the binary and by tests.
int cli_main(int argc, const char* const* argv);

}  // namespace nsdm::cli
