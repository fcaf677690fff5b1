#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace graphrl {

// Dense row-major n-dimensional array: shape plus flat storage.
// Callers compute offsets themselves; this is deliberately minimal.
template <typename T>
struct Array {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Array() = default;

  explicit Array(std::vector<std::size_t> s, T fill = T{}) : shape(std::move(s)) {
    data.assign(element_count(shape), fill);
  }

  Array(std::vector<std::size_t> s, std::vector<T> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != element_count(shape))
      throw std::invalid_argument("array data size does not match shape");
  }

  static std::size_t element_count(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
  }

  std::size_t rank() const { return shape.size(); }
  std::size_t size() const { return data.size(); }

  friend bool operator==(const Array&, const Array&) = default;
};

using U8Array = Array<std::uint8_t>;
using U64Array = Array<std::uint64_t>;

}  // namespace graphrl
