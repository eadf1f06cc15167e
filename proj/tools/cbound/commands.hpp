#pragma once

#include "cbound/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cbound::cli {

enum ExitCode : int { kOk = 0, kClaimFailed = 1, kConfigError = 2 };

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

/// Defaults or the config file, then command-line overrides, then validation.
Scenario resolve_scenario(const Overrides& o);

// Each command writes into <out>/<command>/ and returns kOk or kClaimFailed.
int cmd_curves(const Scenario& s, const std::filesystem::path& out, std::ostream& log);
int cmd_boundary(const Scenario& s, const std::filesystem::path& out, std::ostream& log);
int cmd_jmap(const Scenario& s, const std::filesystem::path& out, std::ostream& log);
int cmd_confmap(const Scenario& s, const std::filesystem::path& out, std::ostream& log);
int cmd_oracle_check(const Scenario& s, const std::filesystem::path& out, std::ostream& log);
int cmd_verify(const Scenario& s, const std::filesystem::path& out, std::ostream& log);

/// Full command line: parses, dispatches and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace cbound::cli
