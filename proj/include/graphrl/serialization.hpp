#pragma once

#include <iosfwd>
#include <string>

#include "graphrl/graph.hpp"

namespace graphrl {

// One graph per line, ASCII: "k is_directed allow_loops n" followed by the
// r*n bitmask-out words row-major, where r = k-1 when the graph is fully
// colored and k otherwise. The parser infers r from the token count.
std::string to_bitmask_line(const EdgeColoredGraph& graph);
EdgeColoredGraph parse_bitmask_line(const std::string& line);

// Whole-file codecs for every format, one graph per file. Bitmask formats use
// the single-line layout above (BitmaskIn swaps in the in-mask words); the
// others put the same four header tokens on the first line and the array
// values below it, one row per leading index. Writers are canonical, so
// re-encoding a file round-trips byte-exactly.
void write_graph_file(std::ostream& out, const EdgeColoredGraph& graph, GraphFormat format);
EdgeColoredGraph read_graph_file(std::istream& in, GraphFormat format);

// Lower snake-case spellings used on the command line ("bitmask_out", ...).
GraphFormat parse_format_name(const std::string& name);
const char* format_cli_name(GraphFormat format);

}  // namespace graphrl
