// Acceptance suite: one line per criterion, non-zero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ndg/ndg.hpp"
#include "oracles.hpp"

using namespace ndg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
    pass = pass && ok;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

constexpr std::uint64_t kSeed = 20260114;
const std::vector<std::size_t> kCurveSizes{500, 2000, 8000};

Outcome fig1a_constant() {
  Outcome o;
  const auto spec = builtin_spec("fig1a");
  double worst_spec = 0.0;
  const auto pts = oracle::spread_on_support(spec, 25);
  for (const auto& p : pts) worst_spec = std::max(worst_spec, std::abs(spec_d_tau(spec, p.x, p.y) + 0.25));
  o.check(pts.size() == 100 && worst_spec <= 1e-9, "max|spec d_tau + 1/4| over 100 pts = " + num(worst_spec) + " <= 1e-9");
  const auto s = draw(spec, 100000, kSeed);
  double worst = 0.0;
  for (double d : d_tau_values(s)) worst = std::max(worst, std::abs(d + 0.25));
  o.check(worst <= 0.02, "max|d_tau_hat + 1/4| = " + num(worst) + " <= 0.02");
  const double s2 = sigma2_tau(s);
  o.check(s2 <= 0.01, "sigma2_tau = " + num(s2) + " <= 0.01");
  return o;
}

Outcome fig1b_constant() {
  Outcome o;
  const auto spec = builtin_spec("fig1b");
  const auto pts = oracle::spread_on_support(spec, 25);
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, std::abs(spec_d_tau(spec, p.x, p.y) + 3.0 / 22.0));
  o.check(pts.size() == 100 && worst <= 1e-8, "max|spec d_tau + 3/22| over 100 pts on 4 pieces = " + num(worst) + " <= 1e-8");
  const double s2 = sigma2_tau(draw(spec, 100000, kSeed));
  o.check(s2 <= 0.01, "sigma2_tau = " + num(s2) + " <= 0.01");
  return o;
}

Outcome fig1b_perturbed() {
  Outcome o;
  const auto spec = builtin_spec("fig1b-weights", BuiltinParams::with_weights({0.25, 0.25, 0.25, 0.25}));
  const auto r = replicate_statistics({spec, 8000, 300, kSeed, 0});
  o.check(r.scaled_var_tau >= 0.05, "scaled_var_tau(n=8000) = " + num(r.scaled_var_tau) + " >= 0.05");
  const auto c = degeneracy_curve(spec, kCurveSizes, 300, kSeed);
  o.check(in_range(c.slope_tau, -0.15, 0.15), "slope = " + num(c.slope_tau) + " in [-0.15, 0.15]");
  return o;
}

Outcome independence() {
  Outcome o;
  const auto r = replicate_statistics({builtin_spec("independent-uniform"), 2000, 500, kSeed, 0});
  o.check(std::abs(r.scaled_var_tau - 4.0 / 9.0) <= 0.06, "scaled_var_tau = " + num(r.scaled_var_tau) + " (4/9 +- 0.06)");
  o.check(std::abs(r.scaled_var_rho - 1.0) <= 0.12, "scaled_var_rho = " + num(r.scaled_var_rho) + " (1 +- 0.12)");
  o.check(std::abs(r.mean_sigma2_tau - 4.0 / 9.0) <= 0.06, "mean_sigma2_tau = " + num(r.mean_sigma2_tau) + " (4/9 +- 0.06)");
  o.check(std::abs(r.mean_sigma2_rho - 1.0) <= 0.12, "mean_sigma2_rho = " + num(r.mean_sigma2_rho) + " (1 +- 0.12)");
  return o;
}

Outcome degeneracy_decay() {
  Outcome o;
  const auto a = degeneracy_curve(builtin_spec("fig1a"), kCurveSizes, 300, kSeed);
  o.check(in_range(a.slope_tau, -1.4, -0.6), "fig1a slope = " + num(a.slope_tau) + " in [-1.4, -0.6]");
  const auto u = degeneracy_curve(builtin_spec("independent-uniform"), kCurveSizes, 300, kSeed);
  o.check(in_range(u.slope_tau, -0.15, 0.15), "independent-uniform slope = " + num(u.slope_tau) + " in [-0.15, 0.15]");
  return o;
}

Outcome two_segments() {
  Outcome o;
  const auto spec = builtin_spec("two-segments");
  const auto w = find_rectangle_witness(snap(support_points(spec, 0.005), 0.02));
  o.check(!w.has_value(), std::string("witness (res 0.005, cell 0.02) = ") + (w ? "found" : "none"));
  const double s2 = sigma2_tau(draw(spec, 100000, kSeed));
  o.check(s2 >= 0.05, "sigma2_tau = " + num(s2) + " >= 0.05");
  return o;
}

Outcome fat_cantor() {
  Outcome o;
  const auto support = support_points(builtin_spec("fat-cantor", BuiltinParams::with_depth(5)), std::ldexp(1.0, -10));
  const auto snapped = snap(support, std::ldexp(1.0, -8));
  const auto w = find_rectangle_witness(snapped);
  o.check(w.has_value() && witness_is_valid(snapped, *w),
          std::string("depth-5 witness (res 2^-10, cell 2^-8) = ") + (w ? "found" : "none"));
  const double s2 = sigma2_tau(draw(builtin_spec("fat-cantor"), 100000, kSeed));
  o.check(s2 >= 0.01, "sigma2_tau = " + num(s2) + " >= 0.01");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 gen(kSeed);
  int tau_mismatch = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + gen() % 499;
    const int levels = rep % 4 == 0 ? static_cast<int>(1 + gen() % 5) : 0;
    const auto s = oracle::random_sample(gen, n, levels);
    tau_mismatch += kendall_tau(s) != oracle::kendall_pairs(s);
  }
  o.check(tau_mismatch == 0, "kendall_tau vs pair oracle mismatches = " + std::to_string(tau_mismatch) + "/200");
  int witness_mismatch = 0, found = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const int side = 3 + static_cast<int>(gen() % 10);
    const std::size_t count = gen() % 41;
    std::vector<Point> pts;
    for (std::size_t k = 0; k < count; ++k)
      pts.push_back({static_cast<double>(gen() % side), static_cast<double>(gen() % side)});
    const auto snapped = snap(pts, 1.0);
    const bool fast = find_rectangle_witness(snapped).has_value();
    witness_mismatch += fast != brute_force_witness(snapped).has_value();
    found += fast;
  }
  o.check(witness_mismatch == 0, "witness vs brute force mismatches = " + std::to_string(witness_mismatch) +
                                     "/500 (" + std::to_string(found) + " with witness)");
  return o;
}

Outcome identity_suite() {
  Outcome o;
  std::mt19937_64 gen(kSeed + 1);
  std::normal_distribution<double> z;
  int unequal = 0, cases = 0, out_of_range = 0;
  while (cases < 1000) {
    const auto s = oracle::random_sample(gen, 2 + gen() % 300, cases % 3 == 0 ? 2 : 0);
    double x1 = z(gen), x2 = z(gen), y1 = z(gen), y2 = z(gen);
    if (x1 == x2 || y1 == y2) continue;
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    const auto r = rectangle_mass_identity(s, {x1, x2, y1, y2});
    unequal += !(r.mass == r.ie_sum && r.ie_units == 2 * r.mass_count);
    for (double d : d_tau_values(s)) out_of_range += !(d >= -0.75 && d <= 0.25);
    ++cases;
  }
  o.check(unequal == 0, "rectangle identity unequal pairs = " + std::to_string(unequal) + "/1000");
  o.check(out_of_range == 0, "d_tau values outside [-3/4, 1/4] = " + std::to_string(out_of_range));

  int variant = 0;
  for (const char* name : {"independent-uniform", "two-segments", "fig1b", "fat-cantor"}) {
    const auto s = draw(builtin_spec(name), 5000, kSeed);
    std::vector<double> tx(s.xs().begin(), s.xs().end()), ty(s.ys().begin(), s.ys().end());
    for (double& v : tx) v = v * v * v + v;
    for (double& v : ty) v = std::exp(v);
    const auto t = validate_sample(tx, ty, TiePolicy::midrank);
    variant += d_tau_values(s) != d_tau_values(t) || d_rho_values(s) != d_rho_values(t) ||
               sigma2_tau(s) != sigma2_tau(t) || sigma2_rho(s) != sigma2_rho(t);
  }
  o.check(variant == 0, "specs with transform-variant d/sigma2 = " + std::to_string(variant) + "/4");
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "fig1a d_tau constant -1/4", 30, fig1a_constant},
      {"AC2", "fig1b d_tau constant -3/22", 60, fig1b_constant},
      {"AC3", "fig1b perturbed weights non-degenerate", 300, fig1b_perturbed},
      {"AC4", "independence checkpoints", 180, independence},
      {"AC5", "degeneracy decay slopes", 300, degeneracy_decay},
      {"AC6", "two-segments: no witness yet non-degenerate", 30, two_segments},
      {"AC7", "fat-cantor witness and non-degeneracy", 60, fat_cantor},
      {"AC8", "oracle equivalences", 120, oracle_equivalence},
      {"AC9", "identity suite", 60, identity_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs <= c.time_limit_s, "runtime " + num(secs) + " s <= " + num(c.time_limit_s) + " s");
    std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
