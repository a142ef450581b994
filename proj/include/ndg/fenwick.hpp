#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ndg {

// Binary indexed counting array over positions [0, size).
template <typename T = std::int64_t>
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t size) : tree_(size + 1, T{}) {}

  void add(std::size_t pos, T delta) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  // Sum over positions [0, pos].
  [[nodiscard]] T prefix(std::size_t pos) const {
    T s{};
    for (std::size_t i = pos + 1; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  [[nodiscard]] T total() const { return size() == 0 ? T{} : prefix(size() - 1); }

  [[nodiscard]] std::size_t size() const noexcept { return tree_.size() - 1; }

 private:
  std::vector<T> tree_;
};

}  // namespace ndg
