#pragma once

#include "geoball/manifold.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace geoball {

// Bad command line or configuration; maps to exit code 1.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { csv, json };
enum class Oracle { shooting, fd, both };

struct Ladder {
    double start = 0;
    double factor = 0;
    int count = 0;
};

struct RunConfig {
    std::string command;
    std::string space;          // builtin shorthand
    std::string manifold_file;  // JSON description, alternative to space
    std::vector<double> radii;
    std::optional<Ladder> ladder;       // radii start * factor^i
    std::optional<Ladder> ladder_to_R;  // radii R - start * factor^i
    std::string out;                    // empty for stdout
    OutputFormat format = OutputFormat::csv;
    std::optional<double> tol;
    Oracle oracle = Oracle::shooting;
    int fd_nodes = 16000;
    int criterion = 0;  // accept: 0 runs all
};

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    // set when some row failed; the table still carries a diagnostic row
    bool failed = false;
};

Manifold config_manifold(const RunConfig& cfg);
std::vector<double> config_radii(const RunConfig& cfg, const Manifold& man);

// One table per command; throws UsageError, DomainError or NumericalError.
Table run_command(const RunConfig& cfg);
const std::vector<std::string>& command_names();

std::string format_csv(const Table& t);
std::string format_json(const Table& t);

// Parses "a,q,k".
Ladder parse_ladder(const std::string& text);

// Full front end: parse, run, write; returns the exit code.
int cli_main(int argc, char** argv);

} // namespace geoball
