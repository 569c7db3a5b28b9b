#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace secdrive::cli {

/// Runs a resolved configuration, writes outputs under cfg.output_dir and a
/// summary to `out`. Library errors propagate.
int run_command(const RunConfig& cfg, std::ostream& out);

struct SelftestCheck {
  std::string name;
  /// Returns a short detail string; throws or returns false through `ok`.
  std::function<bool(std::string& detail)> run;
};

const std::vector<SelftestCheck>& selftest_checks();

/// Full front end: argument parsing, config layering and exit codes
/// (0 success, 1 numerical failure, 2 validation error).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace secdrive::cli
