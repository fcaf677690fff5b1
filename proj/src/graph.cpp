#include "graphrl/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace graphrl {

namespace {

constexpr std::uint8_t kUnassigned = 255;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ", ";
    out << shape[i];
  }
  out << ')';
  return out.str();
}

void check_order(int n) {
  if (n < 1) fail("graph order must be at least 1");
}

void check_slot(int u, int v, int n, GraphKind kind) {
  check_order(n);
  if (u < 0 || u >= n || v < 0 || v >= n) {
    std::ostringstream out;
    out << "edge slot (" << u << ", " << v << ") out of range for order " << n;
    fail(out.str());
  }
  if (!kind.allow_loops && u == v) fail("loop slot requested while loops are disallowed");
  if (!kind.is_directed && u > v)
    fail("undirected edge slots take u <= v");
}

// Number of slots in clockwise layers 0..L-1.
std::size_t layers_before(int L, GraphKind kind) {
  auto l = static_cast<std::size_t>(L);
  if (kind.is_directed) return kind.allow_loops ? l * l : l * (l - 1);
  return kind.allow_loops ? l * (l + 1) / 2 : l * (l - 1) / 2;
}

std::size_t layer_size(int j, GraphKind kind) {
  auto s = static_cast<std::size_t>(j);
  if (kind.is_directed) return kind.allow_loops ? 2 * s + 1 : 2 * s;
  return kind.allow_loops ? s + 1 : s;
}

}  // namespace

const char* format_name(GraphFormat f) {
  switch (f) {
    case GraphFormat::BitmaskOut: return "BitmaskOut";
    case GraphFormat::BitmaskIn: return "BitmaskIn";
    case GraphFormat::AdjacencyColors: return "AdjacencyColors";
    case GraphFormat::AdjacencyBinary: return "AdjacencyBinary";
    case GraphFormat::FlatRowMajorColors: return "FlatRowMajorColors";
    case GraphFormat::FlatRowMajorBinary: return "FlatRowMajorBinary";
    case GraphFormat::FlatClockwiseColors: return "FlatClockwiseColors";
    case GraphFormat::FlatClockwiseBinary: return "FlatClockwiseBinary";
  }
  return "?";
}

std::size_t flattened_length(int order, GraphKind kind) {
  check_order(order);
  auto n = static_cast<std::size_t>(order);
  if (kind.is_directed) return kind.allow_loops ? n * n : n * n - n;
  return kind.allow_loops ? n * (n + 1) / 2 : n * (n - 1) / 2;
}

std::size_t row_major_index(int u, int v, int order, GraphKind kind) {
  check_slot(u, v, order, kind);
  auto n = static_cast<std::size_t>(order);
  auto uu = static_cast<std::size_t>(u);
  auto vv = static_cast<std::size_t>(v);
  if (kind.is_directed) {
    if (kind.allow_loops) return uu * n + vv;
    return uu * (n - 1) + vv - (v > u ? 1 : 0);
  }
  if (kind.allow_loops) return uu * n - uu * (uu - 1) / 2 + (vv - uu);
  return uu * n - uu * (uu + 1) / 2 + (vv - uu - 1);
}

std::pair<int, int> row_major_slot(std::size_t index, int order, GraphKind kind) {
  check_order(order);
  if (index >= flattened_length(order, kind)) fail("row-major index out of range");
  auto n = static_cast<std::size_t>(order);
  std::size_t rest = index;
  for (int u = 0; u < order; ++u) {
    std::size_t row;
    std::size_t first;  // v of the row's first slot
    if (kind.is_directed) {
      row = kind.allow_loops ? n : n - 1;
      first = 0;
    } else {
      auto uu = static_cast<std::size_t>(u);
      row = kind.allow_loops ? n - uu : n - uu - 1;
      first = kind.allow_loops ? uu : uu + 1;
    }
    if (rest < row) {
      auto v = first + rest;
      if (kind.is_directed && !kind.allow_loops && v >= static_cast<std::size_t>(u))
        ++v;  // diagonal was skipped
      return {u, static_cast<int>(v)};
    }
    rest -= row;
  }
  fail("row-major index out of range");
}

std::size_t clockwise_index(int u, int v, int order, GraphKind kind) {
  check_slot(u, v, order, kind);
  int L = std::max(u, v);
  std::size_t base = layers_before(L, kind);
  if (v == L && (u < L || kind.allow_loops)) {
    // Column part: (0,L),(1,L),...
    return base + static_cast<std::size_t>(u);
  }
  // Row part (directed only): (L,L-1),...,(L,0).
  std::size_t column = kind.allow_loops ? static_cast<std::size_t>(L) + 1
                                        : static_cast<std::size_t>(L);
  return base + column + static_cast<std::size_t>(L - 1 - v);
}

std::pair<int, int> clockwise_slot(std::size_t index, int order, GraphKind kind) {
  check_order(order);
  if (index >= flattened_length(order, kind)) fail("clockwise index out of range");
  std::size_t rest = index;
  for (int j = 0; j < order; ++j) {
    std::size_t size = layer_size(j, kind);
    if (rest < size) {
      std::size_t column = kind.allow_loops ? static_cast<std::size_t>(j) + 1
                                            : static_cast<std::size_t>(j);
      if (rest < column) return {static_cast<int>(rest), j};
      return {j, j - 1 - static_cast<int>(rest - column)};
    }
    rest -= size;
  }
  fail("clockwise index out of range");
}

std::vector<std::pair<int, int>> edge_slot_order(int order, GraphKind kind,
                                                 EdgeOrdering ordering) {
  check_order(order);
  std::vector<std::pair<int, int>> slots;
  slots.reserve(flattened_length(order, kind));
  if (ordering == EdgeOrdering::RowMajor) {
    for (int u = 0; u < order; ++u)
      for (int v = kind.is_directed ? 0 : u; v < order; ++v) {
        if (!kind.allow_loops && u == v) continue;
        slots.emplace_back(u, v);
      }
  } else {
    for (int j = 0; j < order; ++j) {
      for (int i = 0; i <= j; ++i) {
        if (!kind.allow_loops && i == j) continue;
        slots.emplace_back(i, j);
      }
      if (kind.is_directed)
        for (int v = j - 1; v >= 0; --v) slots.emplace_back(j, v);
    }
  }
  return slots;
}

namespace {

// One representation decoded to canonical batch*n*n color bytes.
struct Decoded {
  int n = 0;
  bool batched = false;
  std::size_t batch = 1;
  std::vector<std::uint8_t> colors;
};

struct ShapeSplit {
  bool batched = false;
  std::size_t batch = 1;
  std::vector<std::size_t> base;  // shape without the batch axis
};

ShapeSplit split_batch(const std::vector<std::size_t>& shape, std::size_t base_rank,
                       GraphFormat f) {
  ShapeSplit out;
  if (shape.size() == base_rank) {
    out.base = shape;
    return out;
  }
  if (shape.size() == base_rank + 1) {
    if (shape[0] == 0) fail(std::string(format_name(f)) + ": batch axis must be positive");
    out.batched = true;
    out.batch = shape[0];
    out.base.assign(shape.begin() + 1, shape.end());
    return out;
  }
  fail(std::string(format_name(f)) + ": bad rank for shape " + shape_string(shape));
}

int order_from_flat_length(std::size_t len, GraphKind kind, GraphFormat f) {
  // Smallest order n >= 1 with flattened_length(n) == len.
  for (int n = 1;; ++n) {
    std::size_t l = flattened_length(n, kind);
    if (l == len) return n;
    if (l > len) break;
  }
  fail(std::string(format_name(f)) + ": length " +
       std::to_string(len) + " matches no graph order for this kind");
}

int slice_count_to_colors_base(std::size_t r, int k, GraphFormat f, bool* reduced) {
  if (r == static_cast<std::size_t>(k)) {
    *reduced = false;
    return 0;
  }
  if (r == static_cast<std::size_t>(k) - 1) {
    *reduced = true;
    return 0;
  }
  fail(std::string(format_name(f)) + ": leading slice count " + std::to_string(r) +
       " must be k or k-1 (k = " + std::to_string(k) + ")");
}

void check_color_value(std::uint8_t c, int k, GraphFormat f) {
  if (c > k)
    fail(std::string(format_name(f)) + ": color value " + std::to_string(int(c)) +
         " exceeds k = " + std::to_string(k));
}

// Final structural checks on an assembled canonical matrix of one element.
void finish_element(std::uint8_t* m, int n, int k, GraphKind kind, bool reduced,
                    GraphFormat f) {
  std::uint8_t def = reduced ? 0 : static_cast<std::uint8_t>(k);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      std::uint8_t& c = m[u * n + v];
      if (!kind.allow_loops && u == v) {
        if (c != kUnassigned)
          fail(std::string(format_name(f)) + ": loop encoded while loops are disallowed");
        c = 0;
        continue;
      }
      if (c == kUnassigned) c = def;
    }
  if (!kind.is_directed) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (m[u * n + v] != m[v * n + u])
          fail(std::string(format_name(f)) + ": asymmetric data for an undirected kind");
  }
}

Decoded decode_adjacency_colors(const U8Array& a, int k, GraphKind kind) {
  constexpr GraphFormat f = GraphFormat::AdjacencyColors;
  ShapeSplit s = split_batch(a.shape, 2, f);
  if (s.base.size() != 2 || s.base[0] != s.base[1] || s.base[0] == 0)
    fail("AdjacencyColors: shape must be square, got " + shape_string(a.shape));
  int n = static_cast<int>(s.base[0]);
  Decoded d{n, s.batched, s.batch, {}};
  d.colors.assign(a.data.begin(), a.data.end());
  std::size_t nn = static_cast<std::size_t>(n) * n;
  for (std::size_t b = 0; b < s.batch; ++b) {
    std::uint8_t* m = d.colors.data() + b * nn;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        std::uint8_t c = m[u * n + v];
        check_color_value(c, k, f);
        if (!kind.allow_loops && u == v && c != 0)
          fail("AdjacencyColors: nonzero diagonal while loops are disallowed");
      }
    if (!kind.is_directed)
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (m[u * n + v] != m[v * n + u])
            fail("AdjacencyColors: asymmetric matrix for an undirected kind");
  }
  return d;
}

Decoded decode_adjacency_binary(const U8Array& a, int k, GraphKind kind) {
  constexpr GraphFormat f = GraphFormat::AdjacencyBinary;
  ShapeSplit s = split_batch(a.shape, 3, f);
  if (s.base.size() != 3 || s.base[1] != s.base[2] || s.base[1] == 0)
    fail("AdjacencyBinary: shape must be (slices, n, n), got " + shape_string(a.shape));
  bool reduced = false;
  slice_count_to_colors_base(s.base[0], k, f, &reduced);
  std::size_t r = s.base[0];
  int n = static_cast<int>(s.base[1]);
  std::size_t nn = static_cast<std::size_t>(n) * n;
  Decoded d{n, s.batched, s.batch, {}};
  d.colors.assign(s.batch * nn, kUnassigned);
  for (std::size_t b = 0; b < s.batch; ++b) {
    const std::uint8_t* src = a.data.data() + b * r * nn;
    std::uint8_t* m = d.colors.data() + b * nn;
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t i = 0; i < nn; ++i) {
        std::uint8_t bit = src[c * nn + i];
        if (bit > 1) fail("AdjacencyBinary: entries must be 0 or 1");
        if (!bit) continue;
        std::uint8_t color = static_cast<std::uint8_t>(reduced ? c + 1 : c);
        if (m[i] != kUnassigned)
          fail("AdjacencyBinary: conflicting color slices for one slot");
        m[i] = color;
      }
    finish_element(m, n, k, kind, reduced, f);
  }
  return d;
}

Decoded decode_bitmask(const U64Array& a, int k, GraphKind kind, bool out_direction) {
  GraphFormat f = out_direction ? GraphFormat::BitmaskOut : GraphFormat::BitmaskIn;
  ShapeSplit s = split_batch(a.shape, 2, f);
  if (s.base.size() != 2 || s.base[1] == 0)
    fail(std::string(format_name(f)) + ": shape must be (slices, n), got " +
         shape_string(a.shape));
  bool reduced = false;
  slice_count_to_colors_base(s.base[0], k, f, &reduced);
  std::size_t r = s.base[0];
  int n = static_cast<int>(s.base[1]);
  if (n > 64) fail(std::string(format_name(f)) + ": order exceeds the 64-bit mask width");
  std::size_t nn = static_cast<std::size_t>(n) * n;
  Decoded d{n, s.batched, s.batch, {}};
  d.colors.assign(s.batch * nn, kUnassigned);
  for (std::size_t b = 0; b < s.batch; ++b) {
    const std::uint64_t* src = a.data.data() + b * r * n;
    std::uint8_t* m = d.colors.data() + b * nn;
    for (std::size_t c = 0; c < r; ++c)
      for (int w = 0; w < n; ++w) {
        std::uint64_t word = src[c * n + w];
        if (n < 64 && (word >> n) != 0)
          fail(std::string(format_name(f)) + ": bit set beyond order " + std::to_string(n));
        for (int bpos = 0; bpos < n; ++bpos) {
          if (!((word >> bpos) & 1)) continue;
          int u = out_direction ? w : bpos;
          int v = out_direction ? bpos : w;
          std::uint8_t& cell = m[u * n + v];
          if (cell != kUnassigned)
            fail(std::string(format_name(f)) + ": conflicting color slices for one slot");
          cell = static_cast<std::uint8_t>(reduced ? c + 1 : c);
        }
      }
    finish_element(m, n, k, kind, reduced, f);
  }
  return d;
}

Decoded decode_flat_colors(const U8Array& a, int k, GraphKind kind, EdgeOrdering ord) {
  GraphFormat f = ord == EdgeOrdering::RowMajor ? GraphFormat::FlatRowMajorColors
                                                : GraphFormat::FlatClockwiseColors;
  ShapeSplit s = split_batch(a.shape, 1, f);
  int n = order_from_flat_length(s.base[0], kind, f);
  std::size_t len = s.base[0];
  auto slots = edge_slot_order(n, kind, ord);
  std::size_t nn = static_cast<std::size_t>(n) * n;
  Decoded d{n, s.batched, s.batch, {}};
  d.colors.assign(s.batch * nn, 0);
  for (std::size_t b = 0; b < s.batch; ++b) {
    const std::uint8_t* src = a.data.data() + b * len;
    std::uint8_t* m = d.colors.data() + b * nn;
    for (std::size_t i = 0; i < len; ++i) {
      std::uint8_t c = src[i];
      check_color_value(c, k, f);
      auto [u, v] = slots[i];
      m[u * n + v] = c;
      if (!kind.is_directed) m[v * n + u] = c;
    }
  }
  return d;
}

Decoded decode_flat_binary(const U8Array& a, int k, GraphKind kind, EdgeOrdering ord) {
  GraphFormat f = ord == EdgeOrdering::RowMajor ? GraphFormat::FlatRowMajorBinary
                                                : GraphFormat::FlatClockwiseBinary;
  ShapeSplit s = split_batch(a.shape, 2, f);
  if (s.base.size() != 2)
    fail(std::string(format_name(f)) + ": shape must be (slices, length)");
  bool reduced = false;
  slice_count_to_colors_base(s.base[0], k, f, &reduced);
  std::size_t r = s.base[0];
  std::size_t len = s.base[1];
  int n = order_from_flat_length(len, kind, f);
  auto slots = edge_slot_order(n, kind, ord);
  std::size_t nn = static_cast<std::size_t>(n) * n;
  Decoded d{n, s.batched, s.batch, {}};
  d.colors.assign(s.batch * nn, kUnassigned);
  for (std::size_t b = 0; b < s.batch; ++b) {
    const std::uint8_t* src = a.data.data() + b * r * len;
    std::uint8_t* m = d.colors.data() + b * nn;
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t i = 0; i < len; ++i) {
        std::uint8_t bit = src[c * len + i];
        if (bit > 1) fail(std::string(format_name(f)) + ": entries must be 0 or 1");
        if (!bit) continue;
        auto [u, v] = slots[i];
        std::uint8_t& cell = m[u * n + v];
        if (cell != kUnassigned)
          fail(std::string(format_name(f)) + ": conflicting color slices for one slot");
        cell = static_cast<std::uint8_t>(reduced ? c + 1 : c);
        if (!kind.is_directed) m[v * n + u] = cell;
      }
    // Mirrors were written alongside, so only default-fill remains here.
    std::uint8_t def = reduced ? 0 : static_cast<std::uint8_t>(k);
    for (std::size_t i = 0; i < nn; ++i)
      if (m[i] == kUnassigned) m[i] = def;
    if (!kind.allow_loops)
      for (int u = 0; u < n; ++u) m[u * n + u] = 0;
  }
  return d;
}

Decoded decode_rep(GraphFormat f, const GraphArray& a, int k, GraphKind kind) {
  auto need_u8 = [&]() -> const U8Array& {
    if (!std::holds_alternative<U8Array>(a))
      fail(std::string(format_name(f)) + ": expected uint8 data");
    return std::get<U8Array>(a);
  };
  auto need_u64 = [&]() -> const U64Array& {
    if (!std::holds_alternative<U64Array>(a))
      fail(std::string(format_name(f)) + ": expected uint64 data");
    return std::get<U64Array>(a);
  };
  switch (f) {
    case GraphFormat::BitmaskOut: return decode_bitmask(need_u64(), k, kind, true);
    case GraphFormat::BitmaskIn: return decode_bitmask(need_u64(), k, kind, false);
    case GraphFormat::AdjacencyColors: return decode_adjacency_colors(need_u8(), k, kind);
    case GraphFormat::AdjacencyBinary: return decode_adjacency_binary(need_u8(), k, kind);
    case GraphFormat::FlatRowMajorColors:
      return decode_flat_colors(need_u8(), k, kind, EdgeOrdering::RowMajor);
    case GraphFormat::FlatRowMajorBinary:
      return decode_flat_binary(need_u8(), k, kind, EdgeOrdering::RowMajor);
    case GraphFormat::FlatClockwiseColors:
      return decode_flat_colors(need_u8(), k, kind, EdgeOrdering::Clockwise);
    case GraphFormat::FlatClockwiseBinary:
      return decode_flat_binary(need_u8(), k, kind, EdgeOrdering::Clockwise);
  }
  fail("unknown graph format");
}

}  // namespace

struct EdgeColoredGraph::Impl {
  int k = 2;
  GraphKind kind;
  int n = 1;
  bool batched = false;
  std::size_t batch = 1;
  std::vector<std::uint8_t> colors;  // batch * n * n

  mutable std::mutex cache_mutex;
  mutable std::array<std::optional<GraphArray>, 8> cache;
  mutable std::optional<std::vector<std::uint8_t>> fully_colored_per;

  const std::vector<std::uint8_t>& fully_colored_flags() const;
  const GraphArray& representation(GraphFormat f) const;
  GraphArray encode(GraphFormat f, bool reduced) const;
};

const std::vector<std::uint8_t>& EdgeColoredGraph::Impl::fully_colored_flags() const {
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (!fully_colored_per) {
    std::vector<std::uint8_t> flags(batch, 1);
    std::size_t nn = static_cast<std::size_t>(n) * n;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::uint8_t* m = colors.data() + b * nn;
      for (int u = 0; u < n && flags[b]; ++u)
        for (int v = 0; v < n; ++v) {
          if (!kind.allow_loops && u == v) continue;
          if (m[u * n + v] == k) {
            flags[b] = 0;
            break;
          }
        }
    }
    fully_colored_per = std::move(flags);
  }
  return *fully_colored_per;
}

GraphArray EdgeColoredGraph::Impl::encode(GraphFormat f, bool reduced) const {
  std::size_t nn = static_cast<std::size_t>(n) * n;
  std::size_t r = static_cast<std::size_t>(reduced ? k - 1 : k);
  auto with_batch = [&](std::vector<std::size_t> base) {
    if (batched) base.insert(base.begin(), batch);
    return base;
  };
  auto slice_of = [&](std::uint8_t color, bool* include) -> std::size_t {
    // Which slice carries this color; *include false for color k (uncolored)
    // and, in reduced form, color 0.
    if (color == k || (reduced && color == 0)) {
      *include = false;
      return 0;
    }
    *include = true;
    return static_cast<std::size_t>(reduced ? color - 1 : color);
  };

  switch (f) {
    case GraphFormat::AdjacencyColors:
      return U8Array(with_batch({static_cast<std::size_t>(n), static_cast<std::size_t>(n)}),
                     colors);
    case GraphFormat::AdjacencyBinary: {
      U8Array out(with_batch({r, static_cast<std::size_t>(n), static_cast<std::size_t>(n)}));
      for (std::size_t b = 0; b < batch; ++b) {
        const std::uint8_t* m = colors.data() + b * nn;
        std::uint8_t* dst = out.data.data() + b * r * nn;
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            if (!kind.allow_loops && u == v) continue;
            bool include = false;
            std::size_t c = slice_of(m[u * n + v], &include);
            if (include) dst[c * nn + static_cast<std::size_t>(u) * n + v] = 1;
          }
      }
      return out;
    }
    case GraphFormat::BitmaskOut:
    case GraphFormat::BitmaskIn: {
      if (n > 64) fail(std::string(format_name(f)) + ": order exceeds the 64-bit mask width");
      bool out_direction = f == GraphFormat::BitmaskOut;
      U64Array out(with_batch({r, static_cast<std::size_t>(n)}));
      for (std::size_t b = 0; b < batch; ++b) {
        const std::uint8_t* m = colors.data() + b * nn;
        std::uint64_t* dst = out.data.data() + b * r * n;
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            if (!kind.allow_loops && u == v) continue;
            bool include = false;
            std::size_t c = slice_of(m[u * n + v], &include);
            if (!include) continue;
            int w = out_direction ? u : v;
            int bpos = out_direction ? v : u;
            dst[c * n + w] |= std::uint64_t{1} << bpos;
          }
      }
      return out;
    }
    case GraphFormat::FlatRowMajorColors:
    case GraphFormat::FlatClockwiseColors: {
      auto ord = f == GraphFormat::FlatRowMajorColors ? EdgeOrdering::RowMajor
                                                      : EdgeOrdering::Clockwise;
      auto slots = edge_slot_order(n, kind, ord);
      U8Array out(with_batch({slots.size()}));
      for (std::size_t b = 0; b < batch; ++b) {
        const std::uint8_t* m = colors.data() + b * nn;
        std::uint8_t* dst = out.data.data() + b * slots.size();
        for (std::size_t i = 0; i < slots.size(); ++i)
          dst[i] = m[slots[i].first * n + slots[i].second];
      }
      return out;
    }
    case GraphFormat::FlatRowMajorBinary:
    case GraphFormat::FlatClockwiseBinary: {
      auto ord = f == GraphFormat::FlatRowMajorBinary ? EdgeOrdering::RowMajor
                                                      : EdgeOrdering::Clockwise;
      auto slots = edge_slot_order(n, kind, ord);
      std::size_t len = slots.size();
      U8Array out(with_batch({r, len}));
      for (std::size_t b = 0; b < batch; ++b) {
        const std::uint8_t* m = colors.data() + b * nn;
        std::uint8_t* dst = out.data.data() + b * r * len;
        for (std::size_t i = 0; i < len; ++i) {
          bool include = false;
          std::size_t c = slice_of(m[slots[i].first * n + slots[i].second], &include);
          if (include) dst[c * len + i] = 1;
        }
      }
      return out;
    }
  }
  fail("unknown graph format");
}

const GraphArray& EdgeColoredGraph::Impl::representation(GraphFormat f) const {
  bool reduced;
  {
    const auto& flags = fully_colored_flags();
    reduced = std::all_of(flags.begin(), flags.end(), [](std::uint8_t x) { return x; });
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[static_cast<std::size_t>(f)];
  if (!slot) slot = encode(f, reduced);
  return *slot;
}

EdgeColoredGraph::EdgeColoredGraph(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

EdgeColoredGraph::EdgeColoredGraph(int edge_colors, GraphKind kind,
                                   std::vector<std::pair<GraphFormat, GraphArray>> reps) {
  if (edge_colors < 2) fail("edge_colors must be at least 2");
  if (edge_colors > 254) fail("edge_colors must fit a color byte (k <= 254)");
  if (reps.empty()) fail("at least one representation is required");
  auto impl = std::make_shared<Impl>();
  impl->k = edge_colors;
  impl->kind = kind;
  bool first = true;
  Decoded merged;
  for (const auto& [fmt, array] : reps) {
    Decoded d = decode_rep(fmt, array, edge_colors, kind);
    if (first) {
      merged = std::move(d);
      first = false;
      continue;
    }
    if (d.n != merged.n || d.batched != merged.batched || d.batch != merged.batch)
      fail("representations disagree on order or batch shape");
    if (d.colors != merged.colors)
      fail("representations decode to different colorings");
  }
  impl->n = merged.n;
  impl->batched = merged.batched;
  impl->batch = merged.batch;
  impl->colors = std::move(merged.colors);
  impl_ = std::move(impl);
}

int EdgeColoredGraph::edge_colors() const { return impl_->k; }
GraphKind EdgeColoredGraph::kind() const { return impl_->kind; }
int EdgeColoredGraph::order() const { return impl_->n; }

std::optional<std::size_t> EdgeColoredGraph::batch_size() const {
  if (!impl_->batched) return std::nullopt;
  return impl_->batch;
}

std::vector<std::uint8_t> EdgeColoredGraph::fully_colored_elements() const {
  return impl_->fully_colored_flags();
}

bool EdgeColoredGraph::is_fully_colored() const {
  const auto& flags = impl_->fully_colored_flags();
  return std::all_of(flags.begin(), flags.end(), [](std::uint8_t x) { return x; });
}

GraphArray EdgeColoredGraph::to_format(GraphFormat fmt) const {
  return impl_->representation(fmt);
}

const U64Array& EdgeColoredGraph::bitmask_out() const {
  return std::get<U64Array>(impl_->representation(GraphFormat::BitmaskOut));
}
const U64Array& EdgeColoredGraph::bitmask_in() const {
  return std::get<U64Array>(impl_->representation(GraphFormat::BitmaskIn));
}
const U8Array& EdgeColoredGraph::adjacency_colors() const {
  return std::get<U8Array>(impl_->representation(GraphFormat::AdjacencyColors));
}
const U8Array& EdgeColoredGraph::adjacency_binary() const {
  return std::get<U8Array>(impl_->representation(GraphFormat::AdjacencyBinary));
}
const U8Array& EdgeColoredGraph::flat_row_major_colors() const {
  return std::get<U8Array>(impl_->representation(GraphFormat::FlatRowMajorColors));
}
const U8Array& EdgeColoredGraph::flat_row_major_binary() const {
  return std::get<U8Array>(impl_->representation(GraphFormat::FlatRowMajorBinary));
}
const U8Array& EdgeColoredGraph::flat_clockwise_colors() const {
  return std::get<U8Array>(impl_->representation(GraphFormat::FlatClockwiseColors));
}
const U8Array& EdgeColoredGraph::flat_clockwise_binary() const {
  return std::get<U8Array>(impl_->representation(GraphFormat::FlatClockwiseBinary));
}

const std::vector<std::uint8_t>& EdgeColoredGraph::colors() const { return impl_->colors; }

std::uint8_t EdgeColoredGraph::color_at(std::size_t element, int u, int v) const {
  if (element >= impl_->batch) throw std::out_of_range("batch element out of range");
  int n = impl_->n;
  if (u < 0 || u >= n || v < 0 || v >= n) throw std::out_of_range("vertex out of range");
  return impl_->colors[element * n * n + static_cast<std::size_t>(u) * n + v];
}

EdgeColoredGraph EdgeColoredGraph::stack(const std::vector<EdgeColoredGraph>& graphs) {
  if (graphs.empty()) fail("stack needs at least one graph");
  const auto& head = *graphs.front().impl_;
  auto impl = std::make_shared<Impl>();
  impl->k = head.k;
  impl->kind = head.kind;
  impl->n = head.n;
  impl->batched = true;
  impl->batch = graphs.size();
  impl->colors.reserve(graphs.size() * head.colors.size());
  for (const auto& g : graphs) {
    const auto& gi = *g.impl_;
    if (gi.batched) fail("stack takes single graphs, not batches");
    if (gi.k != head.k || !(gi.kind == head.kind) || gi.n != head.n)
      fail("stack inputs must share edge_colors, kind, and order");
    impl->colors.insert(impl->colors.end(), gi.colors.begin(), gi.colors.end());
  }
  return EdgeColoredGraph(std::move(impl));
}

EdgeColoredGraph EdgeColoredGraph::select(std::size_t index) const {
  if (!impl_->batched) fail("select applies to a batch");
  if (index >= impl_->batch) throw std::out_of_range("batch index out of range");
  auto impl = std::make_shared<Impl>();
  impl->k = impl_->k;
  impl->kind = impl_->kind;
  impl->n = impl_->n;
  std::size_t nn = static_cast<std::size_t>(impl_->n) * impl_->n;
  impl->colors.assign(impl_->colors.begin() + index * nn,
                      impl_->colors.begin() + (index + 1) * nn);
  return EdgeColoredGraph(std::move(impl));
}

bool operator==(const EdgeColoredGraph& a, const EdgeColoredGraph& b) {
  const auto& x = *a.impl_;
  const auto& y = *b.impl_;
  return x.k == y.k && x.kind == y.kind && x.n == y.n && x.batched == y.batched &&
         x.batch == y.batch && x.colors == y.colors;
}

EdgeColoredGraph make_graph(int edge_colors, GraphKind kind,
                            std::vector<std::pair<GraphFormat, GraphArray>> reps) {
  return EdgeColoredGraph(edge_colors, kind, std::move(reps));
}

EdgeColoredGraph make_graph(GraphFormat fmt, GraphArray array, int edge_colors,
                            GraphKind kind) {
  return EdgeColoredGraph(edge_colors, kind, {{fmt, std::move(array)}});
}

}  // namespace graphrl
