#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "ndg/error.hpp"
#include "ndg/rng.hpp"
#include "ndg/sample.hpp"

namespace ndg {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Uniform by length on the closed segment p0–p1.
struct Segment {
  Point p0, p1;
};

// Uniform by arc length; angles in degrees, counter-clockwise from the +x axis.
struct Arc {
  Point center;
  double radius = 1.0;
  double angle_start = 0.0;
  double angle_end = 360.0;
};

// Several arcs treated as one piece, uniform by total arc length.
struct MultiArc {
  std::vector<Arc> arcs;
};

// Uniform by area on [x0,x1]×[y0,y1].
struct Box {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

struct Interval {
  double lo, hi;
};

// Uniform on C_k × C_k ⊂ [0,1]², C_k the depth-k Smith–Volterra–Cantor approximation: step m
// removes an open middle interval of length 4^-m from each of the 2^(m-1) remaining intervals.
struct CantorProduct {
  int depth = 1;
  std::vector<Interval> intervals;  // C_k, ascending
};

// X ~ N(0,1), Y = X + shift.
struct ShiftedGaussianLine {
  double shift = 0.0;
};

using Component = std::variant<Segment, Arc, MultiArc, Box, CantorProduct, ShiftedGaussianLine>;

struct WeightedComponent {
  Component component;
  double weight = 1.0;
  std::string label;
};

inline constexpr int kMaxCantorDepth = 24;
inline constexpr double kWeightSumTolerance = 1e-12;
// Gaussian components are discretized and bounded on x ∈ [-kGaussianSpan, kGaussianSpan].
inline constexpr double kGaussianSpan = 5.0;

inline std::vector<Interval> cantor_intervals(int depth) {
  if (depth < 1 || depth > kMaxCantorDepth) throw Error(ErrorCode::BadParams, "cantor depth out of range");
  std::vector<Interval> cur{{0.0, 1.0}};
  double gap = 1.0;
  for (int m = 1; m <= depth; ++m) {
    gap /= 4.0;
    std::vector<Interval> next;
    next.reserve(cur.size() * 2);
    for (const auto& iv : cur) {
      const double mid = 0.5 * (iv.lo + iv.hi);
      next.push_back({iv.lo, mid - 0.5 * gap});
      next.push_back({mid + 0.5 * gap, iv.hi});
    }
    cur = std::move(next);
  }
  return cur;
}

inline CantorProduct make_cantor_product(int depth) { return CantorProduct{depth, cantor_intervals(depth)}; }

inline double total_length(const std::vector<Interval>& ivs) {
  double s = 0.0;
  for (const auto& iv : ivs) s += iv.hi - iv.lo;
  return s;
}

inline bool in_intervals(const std::vector<Interval>& ivs, double v) {
  auto it = std::upper_bound(ivs.begin(), ivs.end(), v, [](double q, const Interval& iv) { return q < iv.lo; });
  if (it == ivs.begin()) return false;
  --it;
  return v <= it->hi;
}

namespace detail {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

inline double segment_length(const Segment& s) { return std::hypot(s.p1.x - s.p0.x, s.p1.y - s.p0.y); }

inline double arc_length(const Arc& a) { return a.radius * deg2rad(a.angle_end - a.angle_start); }

inline double multiarc_length(const MultiArc& m) {
  double s = 0.0;
  for (const auto& a : m.arcs) s += arc_length(a);
  return s;
}

inline void validate_arc(const Arc& a) {
  if (!(a.radius > 0.0) || !std::isfinite(a.radius)) throw Error(ErrorCode::BadParams, "arc radius must be positive");
  if (!(a.angle_start < a.angle_end) || a.angle_end - a.angle_start > 360.0)
    throw Error(ErrorCode::BadParams, "arc needs angle_start < angle_end spanning at most 360 degrees");
}

inline void validate_component(const Component& c) {
  std::visit(
      [](const auto& comp) {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Segment>) {
          if (comp.p0 == comp.p1) throw Error(ErrorCode::BadParams, "segment endpoints coincide");
        } else if constexpr (std::is_same_v<T, Arc>) {
          validate_arc(comp);
        } else if constexpr (std::is_same_v<T, MultiArc>) {
          if (comp.arcs.empty()) throw Error(ErrorCode::BadParams, "multiarc has no arcs");
          for (const auto& a : comp.arcs) validate_arc(a);
        } else if constexpr (std::is_same_v<T, Box>) {
          if (!(comp.x0 < comp.x1) || !(comp.y0 < comp.y1)) throw Error(ErrorCode::BadParams, "box sides must be positive");
        } else if constexpr (std::is_same_v<T, CantorProduct>) {
          if (comp.depth < 1 || comp.depth > kMaxCantorDepth) throw Error(ErrorCode::BadParams, "cantor depth out of range");
          if (comp.intervals.size() != (std::size_t{1} << comp.depth))
            throw Error(ErrorCode::BadParams, "cantor interval list does not match depth");
        } else if constexpr (std::is_same_v<T, ShiftedGaussianLine>) {
          if (!std::isfinite(comp.shift)) throw Error(ErrorCode::BadParams, "shift must be finite");
        }
      },
      c);
}

}  // namespace detail

// Weighted mixture of geometric components; defines μ and, through the union of the component
// point sets, its support.
class DistributionSpec {
 public:
  explicit DistributionSpec(std::vector<WeightedComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorCode::BadParams, "spec has no components");
    double sum = 0.0;
    for (const auto& wc : components_) {
      if (!(wc.weight > 0.0) || !std::isfinite(wc.weight)) throw Error(ErrorCode::BadParams, "weights must be positive");
      detail::validate_component(wc.component);
      sum += wc.weight;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) throw Error(ErrorCode::BadParams, "weights must sum to 1");
    cumulative_.reserve(components_.size());
    double c = 0.0;
    for (const auto& wc : components_) cumulative_.push_back(c += wc.weight);
  }

  [[nodiscard]] const std::vector<WeightedComponent>& components() const noexcept { return components_; }
  [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }

  // Component index for a uniform variate u ∈ [0,1).
  [[nodiscard]] std::size_t pick(double u) const {
    const double target = u * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), components_.size() - 1);
  }

 private:
  std::vector<WeightedComponent> components_;
  std::vector<double> cumulative_;
};

struct BuiltinParams {
  std::optional<std::vector<double>> weights;  // fig1b-weights
  std::optional<double> w;                     // two-segments: weight of the diagonal
  std::optional<int> depth;                    // fat-cantor

  static BuiltinParams with_weights(std::vector<double> v) {
    BuiltinParams p;
    p.weights = std::move(v);
    return p;
  }
  static BuiltinParams with_w(double v) {
    BuiltinParams p;
    p.w = v;
    return p;
  }
  static BuiltinParams with_depth(int v) {
    BuiltinParams p;
    p.depth = v;
    return p;
  }
};

inline MultiArc fig1b_circle() { return MultiArc{{Arc{{0.5, 0.5}, 0.5, 0.0, 360.0}}}; }

inline MultiArc fig1b_star() {
  return MultiArc{{Arc{{2.0, 4.0}, 0.5, 270.0, 360.0}, Arc{{3.0, 4.0}, 0.5, 180.0, 270.0},
                   Arc{{2.0, 3.0}, 0.5, 0.0, 90.0}, Arc{{3.0, 3.0}, 0.5, 90.0, 180.0}}};
}

inline std::vector<WeightedComponent> fig1b_pieces(const std::vector<double>& w) {
  return {{fig1b_circle(), w[0], "circle"},
          {Arc{{2.0, 3.0}, 1.0, 180.0, 270.0}, w[1], "down"},
          {fig1b_star(), w[2], "star"},
          {Arc{{4.0, 1.0}, 1.0, 90.0, 180.0}, w[3], "up"}};
}

inline const std::vector<std::string_view>& builtin_spec_names() {
  static const std::vector<std::string_view> names{"fig1a",       "fig1b",      "fig1b-weights",
                                                   "two-segments", "independent-uniform", "fat-cantor",
                                                   "singular-shift"};
  return names;
}

inline DistributionSpec builtin_spec(std::string_view name, const BuiltinParams& params = {}) {
  if (name == "fig1a") {
    const Point a{2, 0}, b{4, 2}, c{2, 4}, d{0, 2};
    return DistributionSpec({{Segment{a, b}, 0.25, "lower-right"},
                             {Segment{b, c}, 0.25, "upper-right"},
                             {Segment{c, d}, 0.25, "upper-left"},
                             {Segment{d, a}, 0.25, "lower-left"}});
  }
  if (name == "fig1b") return DistributionSpec(fig1b_pieces({6.0 / 11, 1.0 / 11, 2.0 / 11, 2.0 / 11}));
  if (name == "fig1b-weights") {
    if (!params.weights || params.weights->size() != 4)
      throw Error(ErrorCode::BadParams, "fig1b-weights needs four weights");
    return DistributionSpec(fig1b_pieces(*params.weights));
  }
  if (name == "two-segments") {
    const double w = params.w.value_or(0.5);
    if (!(w > 0.0 && w < 1.0)) throw Error(ErrorCode::BadParams, "two-segments weight must lie in (0,1)");
    return DistributionSpec({{Segment{{0, 0}, {1, 1}}, w, "diagonal"},
                             {Segment{{0.5, 0.5}, {1, 0}}, 1.0 - w, "anti-diagonal"}});
  }
  if (name == "independent-uniform") return DistributionSpec({{Box{0, 1, 0, 1}, 1.0, "unit-square"}});
  if (name == "fat-cantor") return DistributionSpec({{make_cantor_product(params.depth.value_or(8)), 1.0, "cxc"}});
  if (name == "singular-shift") {
    std::vector<WeightedComponent> lines;
    for (double q : {-1.0, -0.5, 0.0, 0.5, 1.0}) lines.push_back({ShiftedGaussianLine{q}, 0.2, "y=x+" + std::to_string(q)});
    return DistributionSpec(std::move(lines));
  }
  throw Error(ErrorCode::UnknownSpecName, std::string(name));
}

namespace detail {

inline Point sample_arc(const Arc& a, double u) {
  const double t = deg2rad(a.angle_start + u * (a.angle_end - a.angle_start));
  return {a.center.x + a.radius * std::cos(t), a.center.y + a.radius * std::sin(t)};
}

inline double sample_intervals(const std::vector<Interval>& ivs, double total, Rng& rng) {
  double target = rng.uniform() * total;
  for (const auto& iv : ivs) {
    const double len = iv.hi - iv.lo;
    if (target < len) return iv.lo + target;
    target -= len;
  }
  return ivs.back().hi;
}

inline Point sample_component(const Component& c, Rng& rng) {
  return std::visit(
      [&rng](const auto& comp) -> Point {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Segment>) {
          const double t = rng.uniform();
          return {comp.p0.x + t * (comp.p1.x - comp.p0.x), comp.p0.y + t * (comp.p1.y - comp.p0.y)};
        } else if constexpr (std::is_same_v<T, Arc>) {
          return sample_arc(comp, rng.uniform());
        } else if constexpr (std::is_same_v<T, MultiArc>) {
          double target = rng.uniform() * multiarc_length(comp);
          for (const auto& a : comp.arcs) {
            const double len = arc_length(a);
            if (target < len) return sample_arc(a, target / len);
            target -= len;
          }
          return sample_arc(comp.arcs.back(), 1.0);
        } else if constexpr (std::is_same_v<T, Box>) {
          const double u = rng.uniform();
          const double v = rng.uniform();
          return {comp.x0 + u * (comp.x1 - comp.x0), comp.y0 + v * (comp.y1 - comp.y0)};
        } else if constexpr (std::is_same_v<T, CantorProduct>) {
          const double total = total_length(comp.intervals);
          const double x = sample_intervals(comp.intervals, total, rng);
          const double y = sample_intervals(comp.intervals, total, rng);
          return {x, y};
        } else {
          const double x = rng.normal();
          return {x, x + comp.shift};
        }
      },
      c);
}

}  // namespace detail

struct LabeledDraw {
  PairedSample sample;
  std::vector<std::size_t> component;  // index of the generating component per point
};

// i.i.d. draws: component by weight, then uniform within it. Uses one Rng stream seeded from
// `seed`; the per-point variate order is (component pick, position variates).
inline LabeledDraw draw_labeled(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::BadParams, "draw needs n >= 2");
  Rng rng(seed);
  std::vector<double> xs(n), ys(n);
  std::vector<std::size_t> which(n);
  for (std::size_t i = 0; i < n; ++i) {
    which[i] = spec.pick(rng.uniform());
    const Point p = detail::sample_component(spec.components()[which[i]].component, rng);
    xs[i] = p.x;
    ys[i] = p.y;
  }
  return LabeledDraw{validate_sample(std::move(xs), std::move(ys), TiePolicy::midrank), std::move(which)};
}

inline PairedSample draw(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  return draw_labeled(spec, n, seed).sample;
}

struct SpecCdfValue {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

namespace detail {

inline double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// Fraction of the parameter range t ∈ [0,1] with p0 + t (p1 - p0) <= q componentwise.
inline double segment_fraction(const Segment& s, double x, double y) {
  double lo = 0.0, hi = 1.0;
  auto constrain = [&](double start, double delta, double bound) {
    if (delta == 0.0) {
      if (!(start <= bound)) hi = -1.0;
      return;
    }
    const double t = (bound - start) / delta;
    if (delta > 0.0)
      hi = std::min(hi, t);
    else
      lo = std::max(lo, t);
  };
  constrain(s.p0.x, s.p1.x - s.p0.x, x);
  constrain(s.p0.y, s.p1.y - s.p0.y, y);
  return hi > lo ? hi - lo : 0.0;
}

// Angular measure (radians) of {θ ∈ [a0,a1] : cx + r cos θ <= x, cy + r sin θ <= y}. The range is
// split at every angle where the arc crosses x = const or y = const; the indicator is constant on
// each piece and is read at the piece midpoint.
inline double arc_angle_below(const Arc& a, double x, double y) {
  const double a0 = deg2rad(a.angle_start);
  const double a1 = deg2rad(a.angle_end);
  const double u = (x - a.center.x) / a.radius;
  const double v = (y - a.center.y) / a.radius;
  if (u <= -1.0 || v <= -1.0) return 0.0;  // empty or a single tangent angle
  if (u >= 1.0 && v >= 1.0) return a1 - a0;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> cuts{a0, a1};
  std::vector<double> base;
  if (std::abs(u) < 1.0) {
    const double al = std::acos(u);
    base.push_back(al);
    base.push_back(-al);
  }
  if (std::abs(v) < 1.0) {
    const double be = std::asin(v);
    base.push_back(be);
    base.push_back(std::numbers::pi - be);
  }
  const auto k_lo = static_cast<long>(std::floor(a0 / two_pi)) - 1;
  const auto k_hi = static_cast<long>(std::ceil(a1 / two_pi)) + 1;
  for (double b : base)
    for (long k = k_lo; k <= k_hi; ++k) {
      const double t = b + static_cast<double>(k) * two_pi;
      if (t > a0 && t < a1) cuts.push_back(t);
    }
  std::sort(cuts.begin(), cuts.end());
  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (a.center.x + a.radius * std::cos(mid) <= x && a.center.y + a.radius * std::sin(mid) <= y)
      measure += cuts[i + 1] - cuts[i];
  }
  return measure;
}

inline double intervals_cdf(const std::vector<Interval>& ivs, double q) {
  if (q >= 1.0) return 1.0;
  double s = 0.0;
  for (const auto& iv : ivs) {
    if (q <= iv.lo) break;
    s += std::min(q, iv.hi) - iv.lo;
  }
  return clip01(s / total_length(ivs));
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Accumulated rounding of the arc split is a few ulps of 2π per cut.
inline constexpr double kArcRoundingBound = 1e-13;

inline SpecCdfValue component_cdf(const Component& c, double x, double y) {
  return std::visit(
      [x, y](const auto& comp) -> SpecCdfValue {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Segment>) {
          return {clip01(segment_fraction(comp, x, y)), 0.0};
        } else if constexpr (std::is_same_v<T, Arc>) {
          return {clip01(arc_angle_below(comp, x, y) / deg2rad(comp.angle_end - comp.angle_start)),
                  kArcRoundingBound};
        } else if constexpr (std::is_same_v<T, MultiArc>) {
          double num = 0.0;
          for (const auto& a : comp.arcs) num += a.radius * arc_angle_below(a, x, y);
          return {clip01(num / multiarc_length(comp)), kArcRoundingBound};
        } else if constexpr (std::is_same_v<T, Box>) {
          const double fx = clip01((x - comp.x0) / (comp.x1 - comp.x0));
          const double fy = clip01((y - comp.y0) / (comp.y1 - comp.y0));
          return {fx * fy, 0.0};
        } else if constexpr (std::is_same_v<T, CantorProduct>) {
          return {intervals_cdf(comp.intervals, x) * intervals_cdf(comp.intervals, y), 1e-15};
        } else {
          return {std_normal_cdf(std::min(x, y - comp.shift)), 1e-15};
        }
      },
      c);
}

}  // namespace detail

// μ((-∞,x]×(-∞,y]) from the exact geometry; ±infinity arguments give the marginals.
inline SpecCdfValue spec_cdf(const DistributionSpec& spec, double x, double y) {
  SpecCdfValue out;
  for (const auto& wc : spec.components()) {
    const auto v = detail::component_cdf(wc.component, x, y);
    out.value += wc.weight * v.value;
    out.abs_error_bound += wc.weight * v.abs_error_bound;
  }
  out.value = detail::clip01(out.value);
  return out;
}

inline double spec_d_tau(const DistributionSpec& spec, double x, double y) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return spec_cdf(spec, x, y).value - 0.5 * (spec_cdf(spec, x, inf).value + spec_cdf(spec, inf, y).value);
}

namespace detail {

inline std::size_t steps_for(double length, double resolution) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / resolution)));
}

inline void discretize_arc(const Arc& a, double resolution, std::vector<Point>& out) {
  const auto m = steps_for(arc_length(a), resolution);
  for (std::size_t i = 0; i <= m; ++i) out.push_back(sample_arc(a, static_cast<double>(i) / static_cast<double>(m)));
}

inline std::vector<double> discretize_intervals(const std::vector<Interval>& ivs, double resolution) {
  std::vector<double> pts;
  for (const auto& iv : ivs) {
    const auto m = steps_for(iv.hi - iv.lo, resolution);
    for (std::size_t i = 0; i <= m; ++i)
      pts.push_back(i == m ? iv.hi : iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(m));
  }
  return pts;
}

}  // namespace detail

// Deterministic discretization of every component with neighbour spacing <= resolution.
inline std::vector<Point> support_points(const DistributionSpec& spec, double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw Error(ErrorCode::BadParams, "resolution must be positive");
  std::vector<Point> out;
  for (const auto& wc : spec.components()) {
    std::visit(
        [&](const auto& comp) {
          using T = std::decay_t<decltype(comp)>;
          if constexpr (std::is_same_v<T, Segment>) {
            const auto m = detail::steps_for(detail::segment_length(comp), resolution);
            for (std::size_t i = 0; i <= m; ++i) {
              const double t = static_cast<double>(i) / static_cast<double>(m);
              out.push_back({comp.p0.x + t * (comp.p1.x - comp.p0.x), comp.p0.y + t * (comp.p1.y - comp.p0.y)});
            }
          } else if constexpr (std::is_same_v<T, Arc>) {
            detail::discretize_arc(comp, resolution, out);
          } else if constexpr (std::is_same_v<T, MultiArc>) {
            for (const auto& a : comp.arcs) detail::discretize_arc(a, resolution, out);
          } else if constexpr (std::is_same_v<T, Box>) {
            const auto mx = detail::steps_for(comp.x1 - comp.x0, resolution);
            const auto my = detail::steps_for(comp.y1 - comp.y0, resolution);
            for (std::size_t i = 0; i <= mx; ++i)
              for (std::size_t j = 0; j <= my; ++j)
                out.push_back({comp.x0 + (comp.x1 - comp.x0) * static_cast<double>(i) / static_cast<double>(mx),
                               comp.y0 + (comp.y1 - comp.y0) * static_cast<double>(j) / static_cast<double>(my)});
          } else if constexpr (std::is_same_v<T, CantorProduct>) {
            const auto axis = detail::discretize_intervals(comp.intervals, resolution);
            for (double x : axis)
              for (double y : axis) out.push_back({x, y});
          } else {
            const auto m = detail::steps_for(2.0 * kGaussianSpan * std::numbers::sqrt2, resolution);
            for (std::size_t i = 0; i <= m; ++i) {
              const double x = -kGaussianSpan + 2.0 * kGaussianSpan * static_cast<double>(i) / static_cast<double>(m);
              out.push_back({x, x + comp.shift});
            }
          }
        },
        wc.component);
  }
  return out;
}

struct BoundingBox {
  double x0, x1, y0, y1;
};

inline BoundingBox bounding_box(std::span<const Point> pts) {
  if (pts.empty()) throw Error(ErrorCode::EmptyInput, "bounding box of no points");
  BoundingBox b{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

}  // namespace ndg
