#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "ndg/error.hpp"
#include "ndg/sample.hpp"

namespace ndg {

// Plug-in estimates of the projection functionals
//   d_tau(x,y) = F(x,y) - (F_X(x) + F_Y(y)) / 2
//   d_rho(x,y) = F_X(x) F_Y(y) - f(x) - g(y),  f(x) = E[F_Y(Y) 1{X <= x}],  g(y) = E[F_X(X) 1{Y <= y}]
// evaluated at the sample points with every c.d.f. replaced by its empirical version.
//
// The first-order projection of Kendall's kernel sign(x1-x2)sign(y1-y2) is 1 + 4 d_tau, so
// n Var(tau_hat) -> 4 Var(4 d_tau) = 64 Var(d_tau). The degree-3 kernel behind Spearman's rho
// projects onto 12 (d_rho + const), giving n Var(rho_hat) -> 144 Var(d_rho).
inline constexpr double kKendallVarianceScale = 64.0;
inline constexpr double kSpearmanVarianceScale = 144.0;
inline constexpr double kDefaultDegeneracyThreshold = 0.02;

struct GradeValues {
  std::vector<double> d_tau;
  std::vector<double> d_rho;
  std::size_t n = 0;
};

namespace detail {

inline void require_pairs(const PairedSample& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::SampleTooSmall, "need n >= 2");
}

// Population variance (divide by n).
inline double variance_n(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

// Σ_{j : key_j <= key_i} weight_j for every i.
inline std::vector<std::int64_t> dominated_weight_sum(std::span<const double> key,
                                                      const std::vector<std::int64_t>& weight) {
  const auto order = argsort(key);
  std::vector<std::int64_t> out(key.size());
  std::int64_t running = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    while (end < order.size() && key[order[end]] == key[order[k]]) ++end;
    for (std::size_t m = k; m < end; ++m) running += weight[order[m]];
    for (std::size_t m = k; m < end; ++m) out[order[m]] = running;
    k = end;
  }
  return out;
}

inline std::pair<double, double> min_max(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace detail

// d̂_tau(X_i, Y_i) = (2 #joint - #x - #y) / (2n), all counts exact integers.
inline std::vector<double> d_tau_values(const PairedSample& sample) {
  detail::require_pairs(sample);
  const auto cj = detail::joint_count_le_at_points(sample);
  const auto cx = detail::count_le_self(sample.xs());
  const auto cy = detail::count_le_self(sample.ys());
  const double denom = 2.0 * static_cast<double>(sample.size());
  std::vector<double> out(sample.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(2 * cj[i] - cx[i] - cy[i]) / denom;
  return out;
}

// d̂_rho(X_i, Y_i) = (cx_i cy_i - Σ_{X_j<=X_i} cy_j - Σ_{Y_j<=Y_i} cx_j) / n², exact in integers.
inline std::vector<double> d_rho_values(const PairedSample& sample) {
  detail::require_pairs(sample);
  const auto cx = detail::count_le_self(sample.xs());
  const auto cy = detail::count_le_self(sample.ys());
  const auto f = detail::dominated_weight_sum(sample.xs(), cy);
  const auto g = detail::dominated_weight_sum(sample.ys(), cx);
  const double n = static_cast<double>(sample.size());
  std::vector<double> out(sample.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(cx[i] * cy[i] - f[i] - g[i]) / (n * n);
  return out;
}

inline GradeValues grade_values(const PairedSample& sample) {
  return GradeValues{d_tau_values(sample), d_rho_values(sample), sample.size()};
}

inline double sigma2_tau(const PairedSample& sample) {
  return kKendallVarianceScale * detail::variance_n(d_tau_values(sample));
}

inline double sigma2_rho(const PairedSample& sample) {
  return kSpearmanVarianceScale * detail::variance_n(d_rho_values(sample));
}

struct Rectangle {
  double x1, x2, y1, y2;
};

struct RectangleMass {
  double mass;    // μ̂((x1,x2]×(y1,y2]) by direct count
  double ie_sum;  // alternating sum of d̂_tau over the four corners
  std::int64_t mass_count;
  std::int64_t ie_units;  // ie_sum in units of 1/(2n); equals 2 * mass_count
};

inline RectangleMass rectangle_mass_identity(const PairedSample& sample, const Rectangle& rect) {
  if (!(rect.x1 < rect.x2) || !(rect.y1 < rect.y2))
    throw Error(ErrorCode::MalformedRectangle, "need x1 < x2 and y1 < y2");
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  std::int64_t inside = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    inside += (rect.x1 < xs[i] && xs[i] <= rect.x2 && rect.y1 < ys[i] && ys[i] <= rect.y2) ? 1 : 0;

  const EmpiricalCdf fx(xs);
  const EmpiricalCdf fy(ys);
  // 2n · d̂_tau(x, y)
  auto scaled_d = [&](double x, double y) {
    return 2 * static_cast<std::int64_t>(joint_count_le(sample, x, y)) -
           static_cast<std::int64_t>(fx.count_le(x)) - static_cast<std::int64_t>(fy.count_le(y));
  };
  const std::int64_t units = scaled_d(rect.x2, rect.y2) - scaled_d(rect.x1, rect.y2) -
                             scaled_d(rect.x2, rect.y1) + scaled_d(rect.x1, rect.y1);
  const double n = static_cast<double>(sample.size());
  return RectangleMass{static_cast<double>(inside) / n, static_cast<double>(units) / (2.0 * n), inside,
                       units};
}

struct DegeneracyReport {
  double tau_hat = 0.0;
  double rho_hat = 0.0;
  double sigma2_tau = 0.0;
  double sigma2_rho = 0.0;
  std::pair<double, double> d_tau_range;
  std::pair<double, double> d_rho_range;
  bool degenerate_tau = false;
  bool degenerate_rho = false;
  double threshold_used = kDefaultDegeneracyThreshold;
};

inline DegeneracyReport degeneracy_report(const PairedSample& sample,
                                          double threshold = kDefaultDegeneracyThreshold) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::BadParams, "threshold must be positive");
  const auto grades = grade_values(sample);
  DegeneracyReport r;
  r.tau_hat = kendall_tau(sample);
  r.rho_hat = spearman_rho(sample);
  r.sigma2_tau = kKendallVarianceScale * detail::variance_n(grades.d_tau);
  r.sigma2_rho = kSpearmanVarianceScale * detail::variance_n(grades.d_rho);
  r.d_tau_range = detail::min_max(grades.d_tau);
  r.d_rho_range = detail::min_max(grades.d_rho);
  r.degenerate_tau = r.sigma2_tau <= threshold;
  r.degenerate_rho = r.sigma2_rho <= threshold;
  r.threshold_used = threshold;
  return r;
}

}  // namespace ndg
