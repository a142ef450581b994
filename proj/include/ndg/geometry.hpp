#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ndg/distributions.hpp"
#include "ndg/error.hpp"

namespace ndg {

struct LatticePoint {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

// Point set rounded onto the lattice origin + cell·Z². Points are unique and sorted by (i, j).
struct SnappedPointSet {
  std::vector<LatticePoint> points;
  double cell = 1.0;
  Point origin;

  [[nodiscard]] Point to_plane(const LatticePoint& p) const {
    return {origin.x + cell * static_cast<double>(p.i), origin.y + cell * static_cast<double>(p.j)};
  }
  [[nodiscard]] bool contains(const LatticePoint& p) const {
    return std::binary_search(points.begin(), points.end(), p);
  }
};

inline SnappedPointSet snap(std::span<const Point> points, double cell, Point origin = {}) {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw Error(ErrorCode::BadParams, "cell must be positive");
  constexpr double limit = 9.0e15;
  SnappedPointSet out{{}, cell, origin};
  out.points.reserve(points.size());
  for (const auto& p : points) {
    const double fi = std::round((p.x - origin.x) / cell);
    const double fj = std::round((p.y - origin.y) / cell);
    if (!(std::abs(fi) < limit) || !(std::abs(fj) < limit)) throw Error(ErrorCode::BadParams, "point outside lattice range");
    out.points.push_back({static_cast<std::int64_t>(fi), static_cast<std::int64_t>(fj)});
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

// Corners (i1,j1),(i1,j2),(i2,j1),(i2,j2) and a strictly interior point, all members of the set.
struct RectangleWitness {
  std::int64_t i1, i2, j1, j2;
  LatticePoint interior;
  double x1, x2, y1, y2;
  Point interior_point;
};

namespace detail {

inline RectangleWitness make_witness(const SnappedPointSet& s, LatticePoint lo, LatticePoint hi, LatticePoint in) {
  const Point a = s.to_plane(lo);
  const Point b = s.to_plane(hi);
  return RectangleWitness{lo.i, hi.i, lo.j, hi.j, in, a.x, b.x, a.y, b.y, s.to_plane(in)};
}

// Merge-sort tree over the points in (i, j) order: finds a point whose index lies in a range and
// whose j lies strictly inside (j1, j2).
class InteriorIndex {
 public:
  explicit InteriorIndex(const std::vector<LatticePoint>& pts) : pts_(pts) {
    size_ = 1;
    while (size_ < pts.size()) size_ <<= 1;
    nodes_.assign(2 * size_, {});
    for (std::size_t k = 0; k < pts.size(); ++k) nodes_[size_ + k].push_back({pts[k].j, k});
    for (std::size_t v = size_ - 1; v >= 1; --v) {
      const auto& l = nodes_[2 * v];
      const auto& r = nodes_[2 * v + 1];
      nodes_[v].resize(l.size() + r.size());
      std::merge(l.begin(), l.end(), r.begin(), r.end(), nodes_[v].begin());
    }
  }

  // Some point with index in [lo, hi) and j1 < j < j2, preferring the smallest (j, index) in each
  // canonical node, nodes visited left to right.
  [[nodiscard]] std::optional<LatticePoint> find(std::size_t lo, std::size_t hi, std::int64_t j1,
                                                 std::int64_t j2) const {
    std::vector<std::size_t> left, right;
    for (std::size_t l = lo + size_, r = hi + size_; l < r; l >>= 1, r >>= 1) {
      if (l & 1) left.push_back(l++);
      if (r & 1) right.push_back(--r);
    }
    left.insert(left.end(), right.rbegin(), right.rend());
    for (std::size_t v : left) {
      const auto& node = nodes_[v];
      auto it = std::upper_bound(node.begin(), node.end(), std::pair{j1, pts_.size()});
      if (it != node.end() && it->first < j2) return pts_[it->second];
    }
    return std::nullopt;
  }

 private:
  const std::vector<LatticePoint>& pts_;
  std::size_t size_ = 1;
  std::vector<std::vector<std::pair<std::int64_t, std::size_t>>> nodes_;
};

struct PairHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const noexcept {
    return static_cast<std::size_t>(mix64(static_cast<std::uint64_t>(p.first) * kGoldenGamma ^
                                          static_cast<std::uint64_t>(p.second)));
  }
};

}  // namespace detail

// Scans columns in ascending i and, within a column, y-pairs (j_a < j_b) lexicographically. A
// pair seen in an earlier column spans a corner rectangle with the first column that had it; that
// widest rectangle is the only one whose interior needs checking, since it contains the interior
// of every other rectangle on the same pair ending at the current column.
inline std::optional<RectangleWitness> find_rectangle_witness(const SnappedPointSet& snapped) {
  const auto& pts = snapped.points;
  if (pts.size() < 5) return std::nullopt;

  std::vector<std::size_t> col_start;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (k == 0 || pts[k].i != pts[k - 1].i) col_start.push_back(k);
  col_start.push_back(pts.size());
  const std::size_t ncols = col_start.size() - 1;
  if (ncols < 3) return std::nullopt;

  const detail::InteriorIndex index(pts);
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::size_t, detail::PairHash> first_column;

  for (std::size_t c = 0; c < ncols; ++c) {
    const std::size_t b = col_start[c], e = col_start[c + 1];
    for (std::size_t p = b; p < e; ++p) {
      for (std::size_t q = p + 1; q < e; ++q) {
        const auto key = std::pair{pts[p].j, pts[q].j};
        auto [it, inserted] = first_column.try_emplace(key, c);
        if (inserted) continue;
        const std::size_t f = it->second;
        if (c - f < 2) continue;
        if (auto in = index.find(col_start[f + 1], col_start[c], key.first, key.second))
          return detail::make_witness(snapped, {pts[col_start[f]].i, key.first}, {pts[b].i, key.second}, *in);
      }
    }
  }
  return std::nullopt;
}

inline constexpr std::size_t kBruteForceLimit = 200;

// Exhaustive check over every lower-left/upper-right corner pair; O(N³).
inline std::optional<RectangleWitness> brute_force_witness(const SnappedPointSet& snapped) {
  const auto& pts = snapped.points;
  if (pts.size() > kBruteForceLimit) throw Error(ErrorCode::TooManyPoints, "brute force limited to 200 points");
  for (const auto& lo : pts) {
    for (const auto& hi : pts) {
      if (!(lo.i < hi.i && lo.j < hi.j)) continue;
      if (!snapped.contains({lo.i, hi.j}) || !snapped.contains({hi.i, lo.j})) continue;
      for (const auto& in : pts)
        if (lo.i < in.i && in.i < hi.i && lo.j < in.j && in.j < hi.j) return detail::make_witness(snapped, lo, hi, in);
    }
  }
  return std::nullopt;
}

inline bool witness_is_valid(const SnappedPointSet& s, const RectangleWitness& w) {
  return w.i1 < w.interior.i && w.interior.i < w.i2 && w.j1 < w.interior.j && w.interior.j < w.j2 &&
         s.contains({w.i1, w.j1}) && s.contains({w.i1, w.j2}) && s.contains({w.i2, w.j1}) &&
         s.contains({w.i2, w.j2}) && s.contains(w.interior);
}

// Fraction of the ceil(w/cell)·ceil(h/cell) cells of bbox that hold at least one point.
inline double occupied_fraction(std::span<const Point> points, double cell, const BoundingBox& bbox) {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw Error(ErrorCode::BadParams, "cell must be positive");
  if (!(bbox.x1 > bbox.x0) || !(bbox.y1 > bbox.y0)) throw Error(ErrorCode::BadParams, "bbox must have positive area");
  const auto nx = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil((bbox.x1 - bbox.x0) / cell)));
  const auto ny = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil((bbox.y1 - bbox.y0) / cell)));
  std::vector<std::uint64_t> cells;
  cells.reserve(points.size());
  for (const auto& p : points) {
    if (p.x < bbox.x0 || p.x > bbox.x1 || p.y < bbox.y0 || p.y > bbox.y1) continue;
    const auto cx = std::min(nx - 1, static_cast<std::uint64_t>((p.x - bbox.x0) / cell));
    const auto cy = std::min(ny - 1, static_cast<std::uint64_t>((p.y - bbox.y0) / cell));
    cells.push_back(cx * ny + cy);
  }
  std::sort(cells.begin(), cells.end());
  const auto occupied = static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
  return static_cast<double>(occupied) / (static_cast<double>(nx) * static_cast<double>(ny));
}

}  // namespace ndg
