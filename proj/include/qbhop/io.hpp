// io.hpp — deterministic number formatting and resolved-config echo blocks.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qbhop {

// Shortest decimal string that parses back to exactly the same double.
// Used for config echoes so a rerun resolves to identical values.
std::string format_shortest(double v);

// Fixed 12-significant-digit formatting for CSV data fields.
std::string format_sig12(double v);

// Ordered key/value pairs of a fully resolved configuration.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// One "key = value" line per entry.
std::string config_block(const ConfigEcho& echo);

// The same block with "# " comment prefixes, for CSV headers.
std::string config_comment_block(const ConfigEcho& echo);

}  // namespace qbhop
