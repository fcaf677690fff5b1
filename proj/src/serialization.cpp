#include "graphrl/serialization.hpp"

#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graphrl {
namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

std::uint64_t parse_token(const std::string& word) {
  if (word.empty() || word.find_first_not_of("0123456789") != std::string::npos)
    fail("bad token '" + word + "'");
  try {
    return std::stoull(word);
  } catch (const std::exception&) {
    fail("token out of range '" + word + "'");
  }
}

std::vector<std::uint64_t> tokenize(std::istream& in) {
  std::vector<std::uint64_t> tokens;
  std::string word;
  while (in >> word) tokens.push_back(parse_token(word));
  return tokens;
}

struct Header {
  int edge_colors = 0;
  GraphKind kind;
  int order = 0;
};

Header read_header(const std::vector<std::uint64_t>& tokens) {
  if (tokens.size() < 4) fail("expected header tokens k, is_directed, allow_loops, n");
  Header h;
  if (tokens[0] < 2 || tokens[0] > 255) fail("edge color count must lie in [2, 255]");
  h.edge_colors = static_cast<int>(tokens[0]);
  if (tokens[1] > 1) fail("is_directed must be 0 or 1");
  if (tokens[2] > 1) fail("allow_loops must be 0 or 1");
  h.kind = GraphKind{tokens[1] == 1, tokens[2] == 1};
  if (tokens[3] < 1 || tokens[3] > std::numeric_limits<int>::max()) fail("order out of range");
  h.order = static_cast<int>(tokens[3]);
  return h;
}

// Payload slice count: plain color formats have none; binary and bitmask
// formats carry r slices with r in {k-1, k}, recovered from the value count.
std::size_t infer_slices(std::size_t values, std::size_t per_slice, int k) {
  // A slotless graph (n = 1 without loops) has empty slices; any admissible
  // count decodes to the same coloring, so take the reduced one.
  if (per_slice == 0 && values == 0) return static_cast<std::size_t>(k) - 1;
  if (per_slice != 0 && values % per_slice == 0) {
    std::size_t r = values / per_slice;
    if (r == static_cast<std::size_t>(k) || r + 1 == static_cast<std::size_t>(k)) return r;
  }
  fail("payload of " + std::to_string(values) + " values matches neither k nor k-1 slices of " +
       std::to_string(per_slice));
}

void write_header(std::ostream& out, const EdgeColoredGraph& g) {
  out << g.edge_colors() << ' ' << int(g.kind().is_directed) << ' ' << int(g.kind().allow_loops)
      << ' ' << g.order();
}

void write_u8_rows(std::ostream& out, const U8Array& a, std::size_t row_length) {
  for (std::size_t i = 0; i < a.data.size(); i += row_length) {
    for (std::size_t j = 0; j < row_length; ++j) {
      if (j) out << ' ';
      out << int(a.data[i + j]);
    }
    out << '\n';
  }
}

std::string bitmask_line(const EdgeColoredGraph& graph, GraphFormat format) {
  const U64Array& words =
      format == GraphFormat::BitmaskOut ? graph.bitmask_out() : graph.bitmask_in();
  std::ostringstream out;
  write_header(out, graph);
  for (std::uint64_t w : words.data) out << ' ' << w;
  return out.str();
}

void require_single(const EdgeColoredGraph& graph) {
  if (graph.batch_size()) fail("serialization takes a single graph, not a batch");
}

std::vector<std::uint8_t> narrow_payload(const std::vector<std::uint64_t>& tokens,
                                         std::uint64_t limit) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(tokens.size() - 4);
  for (std::size_t i = 4; i < tokens.size(); ++i) {
    if (tokens[i] > limit) fail("value " + std::to_string(tokens[i]) + " out of range");
    bytes.push_back(static_cast<std::uint8_t>(tokens[i]));
  }
  return bytes;
}

EdgeColoredGraph decode_tokens(const std::vector<std::uint64_t>& tokens, GraphFormat format) {
  Header h = read_header(tokens);
  auto n = static_cast<std::size_t>(h.order);
  std::size_t values = tokens.size() - 4;
  std::size_t length = flattened_length(h.order, h.kind);

  GraphArray array{U8Array{}};
  switch (format) {
    case GraphFormat::BitmaskOut:
    case GraphFormat::BitmaskIn: {
      std::size_t r = infer_slices(values, n, h.edge_colors);
      array = U64Array({r, n}, std::vector<std::uint64_t>(tokens.begin() + 4, tokens.end()));
      break;
    }
    case GraphFormat::AdjacencyColors:
      if (values != n * n) fail("expected " + std::to_string(n * n) + " adjacency values");
      array = U8Array({n, n}, narrow_payload(tokens, 255));
      break;
    case GraphFormat::AdjacencyBinary: {
      std::size_t r = infer_slices(values, n * n, h.edge_colors);
      array = U8Array({r, n, n}, narrow_payload(tokens, 1));
      break;
    }
    case GraphFormat::FlatRowMajorColors:
    case GraphFormat::FlatClockwiseColors:
      if (values != length) fail("expected " + std::to_string(length) + " flattened values");
      array = U8Array({length}, narrow_payload(tokens, 255));
      break;
    case GraphFormat::FlatRowMajorBinary:
    case GraphFormat::FlatClockwiseBinary: {
      std::size_t r = infer_slices(values, length, h.edge_colors);
      array = U8Array({r, length}, narrow_payload(tokens, 1));
      break;
    }
  }
  return make_graph(format, std::move(array), h.edge_colors, h.kind);
}

}  // namespace

std::string to_bitmask_line(const EdgeColoredGraph& graph) {
  require_single(graph);
  return bitmask_line(graph, GraphFormat::BitmaskOut);
}

EdgeColoredGraph parse_bitmask_line(const std::string& line) {
  std::istringstream in(line);
  return decode_tokens(tokenize(in), GraphFormat::BitmaskOut);
}

void write_graph_file(std::ostream& out, const EdgeColoredGraph& graph, GraphFormat format) {
  require_single(graph);
  auto n = static_cast<std::size_t>(graph.order());
  switch (format) {
    case GraphFormat::BitmaskOut:
    case GraphFormat::BitmaskIn:
      out << bitmask_line(graph, format) << '\n';
      return;
    case GraphFormat::AdjacencyColors:
    case GraphFormat::AdjacencyBinary:
      write_header(out, graph);
      out << '\n';
      write_u8_rows(out, std::get<U8Array>(graph.to_format(format)), n);
      return;
    case GraphFormat::FlatRowMajorColors:
    case GraphFormat::FlatClockwiseColors:
    case GraphFormat::FlatRowMajorBinary:
    case GraphFormat::FlatClockwiseBinary: {
      write_header(out, graph);
      out << '\n';
      write_u8_rows(out, std::get<U8Array>(graph.to_format(format)),
                    flattened_length(graph.order(), graph.kind()));
      return;
    }
  }
  fail("unknown graph format");
}

EdgeColoredGraph read_graph_file(std::istream& in, GraphFormat format) {
  return decode_tokens(tokenize(in), format);
}

GraphFormat parse_format_name(const std::string& name) {
  if (name == "bitmask_out") return GraphFormat::BitmaskOut;
  if (name == "bitmask_in") return GraphFormat::BitmaskIn;
  if (name == "adjacency_colors") return GraphFormat::AdjacencyColors;
  if (name == "adjacency_binary") return GraphFormat::AdjacencyBinary;
  if (name == "flat_row_major_colors") return GraphFormat::FlatRowMajorColors;
  if (name == "flat_row_major_binary") return GraphFormat::FlatRowMajorBinary;
  if (name == "flat_clockwise_colors") return GraphFormat::FlatClockwiseColors;
  if (name == "flat_clockwise_binary") return GraphFormat::FlatClockwiseBinary;
  fail("unknown graph format '" + name + "'");
}

const char* format_cli_name(GraphFormat format) {
  switch (format) {
    case GraphFormat::BitmaskOut: return "bitmask_out";
    case GraphFormat::BitmaskIn: return "bitmask_in";
    case GraphFormat::AdjacencyColors: return "adjacency_colors";
    case GraphFormat::AdjacencyBinary: return "adjacency_binary";
    case GraphFormat::FlatRowMajorColors: return "flat_row_major_colors";
    case GraphFormat::FlatRowMajorBinary: return "flat_row_major_binary";
    case GraphFormat::FlatClockwiseColors: return "flat_clockwise_colors";
    case GraphFormat::FlatClockwiseBinary: return "flat_clockwise_binary";
  }
  return "?";
}

}  // namespace graphrl
