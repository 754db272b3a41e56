// Command-line front end. The binary in tools/ is a thin wrapper around
// run_cli so the whole surface is testable in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitVerify = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Sweep syntax: a value, a comma list, or start:stop:steps (log-spaced when
// `log` is set). `inf` and `-inf` are accepted as values.
[[nodiscard]] std::vector<double> parse_sweep(const std::string& spec, bool log = false);

// %.10g with inf / -inf / nan literals.
[[nodiscard]] std::string format_number(double v);

// key = value lines; '#' starts a comment.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

// Gnuplot script for a CSV produced by this tool, chosen by its header.
// Throws std::invalid_argument on an unknown schema.
[[nodiscard]] std::string plot_script(const std::string& csv_path, double ceiling);

}  // namespace riskbound::cli
