#pragma once

// Command-line front end: argument and config-file parsing, dispatch.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ccshare/experiments.hpp"
#include "ccshare/linalg.hpp"

namespace ccshare {

enum class Subcommand { run, measures, selftest };

struct CliInvocation {
    Subcommand subcommand = Subcommand::run;
    ExperimentConfig config;
    // measures: fixture name (optionally followed by a qubit count) or --state file
    std::vector<std::string> fixture;
    std::optional<std::filesystem::path> state_file;
};

// Thrown by parse_cli for --help; carries the help text.
struct HelpRequested {
    std::string text;
};

// key=value lines, '#' comments, blank lines ignored. Keys are long flag
// names without the leading dashes. Throws UsageError on malformed lines.
std::map<std::string, std::string> parse_config_text(std::string_view text);

// `args` excludes the program name. Flags given on the command line override
// values from --config FILE. Throws UsageError or HelpRequested.
CliInvocation parse_cli(const std::vector<std::string> &args);

// State selected by a measures invocation.
PureState resolve_state(const CliInvocation &invocation);

// All pairwise measures, sums, GGM, 1:rest values and monogamy scores.
void print_measure_report(std::ostream &out, const PureState &psi, const OptimizerSettings &settings);

// Full command execution; returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace ccshare
