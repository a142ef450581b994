#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "ndg/error.hpp"
#include "ndg/fenwick.hpp"

namespace ndg {

enum class TiePolicy { strict, midrank };

using RawPair = std::pair<double, double>;

// n >= 2 finite paired observations. Construct through validate_sample().
class PairedSample {
 public:
  [[nodiscard]] std::span<const double> xs() const noexcept { return xs_; }
  [[nodiscard]] std::span<const double> ys() const noexcept { return ys_; }
  [[nodiscard]] std::size_t size() const noexcept { return xs_.size(); }
  [[nodiscard]] bool ties_in_x() const noexcept { return ties_x_; }
  [[nodiscard]] bool ties_in_y() const noexcept { return ties_y_; }

 private:
  friend PairedSample validate_sample(std::vector<double>, std::vector<double>, TiePolicy);

  PairedSample() = default;

  std::vector<double> xs_;
  std::vector<double> ys_;
  bool ties_x_ = false;
  bool ties_y_ = false;
};

namespace detail {

inline bool has_duplicates(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

// Indices ordering `values` ascending; ties broken by index so the order is deterministic.
inline std::vector<std::size_t> argsort(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

// 0-based compressed rank; equal values share a rank. Second member is the number of distinct values.
inline std::pair<std::vector<std::size_t>, std::size_t> dense_rank(std::span<const double> values) {
  const auto order = argsort(values);
  std::vector<std::size_t> rank(values.size());
  std::size_t next = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && values[order[k]] != values[order[k - 1]]) ++next;
    rank[order[k]] = next;
  }
  return {std::move(rank), values.empty() ? 0 : next + 1};
}

// #{j : values_j <= values_i} for every i.
inline std::vector<std::int64_t> count_le_self(std::span<const double> values) {
  const auto order = argsort(values);
  std::vector<std::int64_t> count(values.size());
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
    for (std::size_t m = k; m < end; ++m) count[order[m]] = static_cast<std::int64_t>(end);
    k = end;
  }
  return count;
}

// Sum over tie groups of g(g-1)/2.
inline std::int64_t tied_pairs(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::int64_t total = 0;
  std::size_t k = 0;
  while (k < sorted.size()) {
    std::size_t end = k;
    while (end < sorted.size() && sorted[end] == sorted[k]) ++end;
    const auto g = static_cast<std::int64_t>(end - k);
    total += g * (g - 1) / 2;
    k = end;
  }
  return total;
}

// Points ordered by (x, y) ascending.
inline std::vector<std::size_t> lex_order(std::span<const double> xs, std::span<const double> ys) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : (ys[a] != ys[b] ? ys[a] < ys[b] : a < b);
  });
  return order;
}

// #{j : X_j <= X_i and Y_j <= Y_i} for every i, by an x-sweep over a Fenwick counter of y-ranks.
inline std::vector<std::int64_t> joint_count_le_at_points(const PairedSample& sample) {
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  const auto [yrank, ydistinct] = dense_rank(ys);
  const auto order = lex_order(xs, ys);
  FenwickTree<std::int64_t> counter(ydistinct);
  std::vector<std::int64_t> count(xs.size());
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    while (end < order.size() && xs[order[end]] == xs[order[k]]) ++end;
    for (std::size_t m = k; m < end; ++m) counter.add(yrank[order[m]], 1);
    for (std::size_t m = k; m < end; ++m) count[order[m]] = counter.prefix(yrank[order[m]]);
    k = end;
  }
  return count;
}

inline std::vector<double> ranks(std::span<const double> values, TiePolicy policy, ErrorCode tie_error) {
  const auto order = argsort(values);
  std::vector<double> rank(values.size());
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
    if (end - k > 1 && policy == TiePolicy::strict) throw Error(tie_error, "tied values under strict policy");
    // Positions k..end-1 carry ranks k+1..end; the midrank is their mean.
    const double mid = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t m = k; m < end; ++m) rank[order[m]] = mid;
    k = end;
  }
  return rank;
}

}  // namespace detail

inline PairedSample validate_sample(std::vector<double> xs, std::vector<double> ys, TiePolicy policy) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::BadParams, "xs and ys differ in length");
  if (xs.empty()) throw Error(ErrorCode::EmptyInput, "no observations");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw Error(ErrorCode::NonFiniteValue, "observation " + std::to_string(i) + " is not finite");
  }
  if (xs.size() < 2) throw Error(ErrorCode::SampleTooSmall, "need at least two observations");
  PairedSample s;
  s.ties_x_ = detail::has_duplicates(xs);
  s.ties_y_ = detail::has_duplicates(ys);
  if (policy == TiePolicy::strict) {
    if (s.ties_x_) throw Error(ErrorCode::TiesInX, "duplicate x value under strict policy");
    if (s.ties_y_) throw Error(ErrorCode::TiesInY, "duplicate y value under strict policy");
  }
  s.xs_ = std::move(xs);
  s.ys_ = std::move(ys);
  return s;
}

inline PairedSample validate_sample(std::span<const RawPair> raw_pairs, TiePolicy policy) {
  std::vector<double> xs, ys;
  xs.reserve(raw_pairs.size());
  ys.reserve(raw_pairs.size());
  for (const auto& [x, y] : raw_pairs) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return validate_sample(std::move(xs), std::move(ys), policy);
}

struct RankVector {
  std::vector<double> rx;
  std::vector<double> ry;
  TiePolicy tie_policy = TiePolicy::strict;
};

// Rank 1 is the smallest value; tie groups get their average rank under midrank.
inline RankVector rank_transform(const PairedSample& sample, TiePolicy policy) {
  return RankVector{detail::ranks(sample.xs(), policy, ErrorCode::TiesInX),
                    detail::ranks(sample.ys(), policy, ErrorCode::TiesInY), policy};
}

// Right-continuous marginal c.d.f. of a set of observations.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> values) : sorted_(values.begin(), values.end()) {
    if (sorted_.empty()) throw Error(ErrorCode::EmptyInput, "empirical cdf of no values");
    std::sort(sorted_.begin(), sorted_.end());
  }

  [[nodiscard]] std::span<const double> sorted_values() const noexcept { return sorted_; }
  [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }

  // #{i : value_i <= q}
  [[nodiscard]] std::size_t count_le(double q) const {
    return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), q) - sorted_.begin());
  }

 private:
  std::vector<double> sorted_;
};

inline double ecdf_eval(const EmpiricalCdf& cdf, double q) {
  return static_cast<double>(cdf.count_le(q)) / static_cast<double>(cdf.size());
}

inline std::size_t joint_count_le(const PairedSample& sample, double x, double y) {
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  std::size_t c = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) c += (xs[i] <= x && ys[i] <= y) ? 1 : 0;
  return c;
}

inline double joint_ecdf_eval(const PairedSample& sample, double x, double y) {
  return static_cast<double>(joint_count_le(sample, x, y)) / static_cast<double>(sample.size());
}

// F̂(X_i, Y_i) for every sample point in O(n log n).
inline std::vector<double> joint_ecdf_at_points(const PairedSample& sample) {
  const auto counts = detail::joint_count_le_at_points(sample);
  const auto n = static_cast<double>(sample.size());
  std::vector<double> out(counts.size());
  std::transform(counts.begin(), counts.end(), out.begin(),
                 [n](std::int64_t c) { return static_cast<double>(c) / n; });
  return out;
}

struct PairCounts {
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t tied = 0;  // tied in x or in y
  std::int64_t total = 0;
};

// Concordant/discordant pair counts by inversion counting over y-ranks in (x, y) order.
inline PairCounts count_pairs(const PairedSample& sample) {
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  const auto n = static_cast<std::int64_t>(sample.size());
  const auto [yrank, ydistinct] = detail::dense_rank(ys);
  const auto order = detail::lex_order(xs, ys);

  PairCounts pc;
  pc.total = n * (n - 1) / 2;
  FenwickTree<std::int64_t> counter(ydistinct);
  std::int64_t inserted = 0;
  std::int64_t both_tied = 0;
  std::size_t run = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    // Strictly smaller x and strictly larger y among earlier points. Earlier points with equal x
    // have y <= current because of the (x, y) order, so they never count here.
    pc.discordant += inserted - counter.prefix(yrank[i]);
    counter.add(yrank[i], 1);
    ++inserted;
    if (k > 0 && xs[order[k - 1]] == xs[i] && ys[order[k - 1]] == ys[i]) {
      ++run;
    } else {
      both_tied += static_cast<std::int64_t>(run * (run - 1) / 2);
      run = 1;
    }
  }
  both_tied += static_cast<std::int64_t>(run * (run - 1) / 2);
  pc.tied = detail::tied_pairs(xs) + detail::tied_pairs(ys) - both_tied;
  pc.concordant = pc.total - pc.discordant - pc.tied;
  return pc;
}

// τ-a: (C - D) / (n(n-1)/2); tied pairs are neither concordant nor discordant.
inline double kendall_tau(const PairedSample& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::SampleTooSmall, "kendall_tau needs n >= 2");
  const auto pc = count_pairs(sample);
  return static_cast<double>(pc.concordant - pc.discordant) / static_cast<double>(pc.total);
}

// Pearson correlation of the midrank vectors; equals 1 - 6Σd²/(n(n²-1)) without ties.
inline double spearman_rho(const PairedSample& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::SampleTooSmall, "spearman_rho needs n >= 2");
  const auto r = rank_transform(sample, TiePolicy::midrank);
  const auto n = static_cast<double>(sample.size());
  const double mean = 0.5 * (n + 1.0);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < r.rx.size(); ++i) {
    const double dx = r.rx[i] - mean;
    const double dy = r.ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateRanks, "constant rank vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace ndg
