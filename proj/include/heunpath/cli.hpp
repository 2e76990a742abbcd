#ifndef HEUNPATH_CLI_HPP
#define HEUNPATH_CLI_HPP

#include "heunpath/core.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heunpath::cli
{

enum class Command { eval, eval_regular, bench, convergence };
enum class OutputFormat { csv, json };

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitCrossesSingularity = 3;
inline constexpr int kExitNumericalFailure = 4;

struct RunConfig {
    Command command = Command::eval;
    HeunParameters params;
    std::optional<complex> from;
    std::optional<complex> to;
    std::size_t n1 = 1;
    std::size_t n2 = 100;
    // Unset: kDefaultPunctureRadius for one-sided runs, kDefaultRegularSeedRadius
    // for runs seeded on both sides of 0.
    std::optional<double> puncture;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> out_path;
    std::optional<CauchyData> cauchy;
    // Seed the eval start point from the regular series at 0 instead of --H0/--H0p.
    bool regular_seed = false;
    std::size_t repeats = 3;
    std::vector<std::size_t> bench_points{1000, 10000, 50000, 100000, 200000};
};

// Parses `RE`, `IMj`, `RE+IMj` or `RE-IMj` (also with `i`). Throws std::invalid_argument.
complex parse_complex(std::string_view text);

// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);

// Parses argv into a RunConfig. Throws std::invalid_argument on bad input;
// returns std::nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char *const *argv, std::ostream &out);

// Checks the RunConfig invariants (n1 >= 1, n2 >= 3, cauchy rules) and the
// Heun parameters. Throws std::invalid_argument or a heunpath::Error.
RunConfig validate_config(RunConfig cfg);

// Runs a validated command, writing data to `out` (or to cfg.out_path) and
// a one-line diagnostic to `err` on failure. Returns the exit code.
// The puncture radius a validated config runs with.
double effective_puncture(const RunConfig &cfg);

int run(const RunConfig &cfg, std::ostream &out, std::ostream &err);

// parse_args + run with the exit-code mapping applied to parse failures.
int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace heunpath::cli

#endif
