#pragma once

#include "graph.hpp"

#include <string_view>
#include <vector>

namespace dyncade {

// Graph text format, one record per line, '#' starts a comment:
//   v <id> [<color>(,<color>)*]
//   e <u> <v>
DynamicGraph parse_graph_text(std::string_view text, DegreePolicy policy);

// Update stream format:
//   +v <id> [colors]   -v <id>   +e <u> <v>   -e <u> <v>   !v <id> [colors]
UpdateOp parse_update_line(std::string_view line, int lineno = 0);
std::vector<UpdateOp> parse_update_stream(std::string_view text);

}  // namespace dyncade
