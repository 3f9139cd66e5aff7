#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "obseq/partitions.hpp"
#include "obseq/processes.hpp"

namespace obseq::cli {

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerdictFail = 2;

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "left-right", "halves", "dyadic:N" or "file:PATH" (partition JSON).
Partition parse_partition(const std::string& spec);

/// Comma-separated reals.
std::vector<double> parse_reals(const std::string& text);

/// Rows separated by ';', entries by ','.
SquareMatrix parse_matrix(const std::string& text);

/// Reads either a symbol file or a JSON report carrying a "sequence" object.
SymbolSequence load_sequence(const std::string& path);

/// Shortest round-trip form, with ".0" appended to integral values.
std::string format_value(double v);

}  // namespace obseq::cli
