#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ndg/degeneracy.hpp"
#include "ndg/distributions.hpp"
#include "ndg/error.hpp"
#include "ndg/rng.hpp"

namespace ndg {

struct McConfig {
  DistributionSpec spec;
  std::size_t n = 2000;
  std::size_t reps = 500;
  std::uint64_t base_seed = 0;
  std::size_t threads = 0;  // 0: NDG_THREADS, else hardware concurrency
};

struct McReport {
  std::vector<double> taus;
  std::vector<double> rhos;
  std::vector<double> sigma2_taus;
  std::vector<double> sigma2_rhos;
  std::size_t n = 0;
  double scaled_var_tau = 0.0;  // n · (reps-1)-normalized variance of taus
  double scaled_var_rho = 0.0;
  double mean_sigma2_tau = 0.0;
  double mean_sigma2_rho = 0.0;
  // Normal-theory standard errors of the four summaries above.
  double scaled_var_tau_se = 0.0;
  double scaled_var_rho_se = 0.0;
  double mean_sigma2_tau_se = 0.0;
  double mean_sigma2_rho_se = 0.0;
};

inline std::size_t thread_budget(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NDG_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double unbiased_variance(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

// Runs body(r) for r in [0, count) on up to `threads` workers; rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < count; r = next++) {
        try {
          body(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Replicate r draws with seed derive_seed(base_seed, r). Per-replicate results land in slot r, and
// aggregation folds in index order, so the report does not depend on the thread count.
inline McReport replicate_statistics(const McConfig& config) {
  if (config.n < 2) throw Error(ErrorCode::BadParams, "n must be >= 2");
  if (config.reps < 2) throw Error(ErrorCode::BadParams, "reps must be >= 2");
  McReport rep;
  rep.n = config.n;
  rep.taus.resize(config.reps);
  rep.rhos.resize(config.reps);
  rep.sigma2_taus.resize(config.reps);
  rep.sigma2_rhos.resize(config.reps);

  detail::parallel_for(config.reps, thread_budget(config.threads), [&](std::size_t r) {
    const auto sample = draw(config.spec, config.n, derive_seed(config.base_seed, r));
    const auto grades = grade_values(sample);
    rep.taus[r] = kendall_tau(sample);
    rep.rhos[r] = spearman_rho(sample);
    rep.sigma2_taus[r] = kKendallVarianceScale * detail::variance_n(grades.d_tau);
    rep.sigma2_rhos[r] = kSpearmanVarianceScale * detail::variance_n(grades.d_rho);
  });

  const double n = static_cast<double>(config.n);
  const double reps = static_cast<double>(config.reps);
  rep.scaled_var_tau = n * detail::unbiased_variance(rep.taus);
  rep.scaled_var_rho = n * detail::unbiased_variance(rep.rhos);
  rep.mean_sigma2_tau = detail::mean_of(rep.sigma2_taus);
  rep.mean_sigma2_rho = detail::mean_of(rep.sigma2_rhos);
  rep.scaled_var_tau_se = rep.scaled_var_tau * std::sqrt(2.0 / (reps - 1.0));
  rep.scaled_var_rho_se = rep.scaled_var_rho * std::sqrt(2.0 / (reps - 1.0));
  rep.mean_sigma2_tau_se = std::sqrt(detail::unbiased_variance(rep.sigma2_taus) / reps);
  rep.mean_sigma2_rho_se = std::sqrt(detail::unbiased_variance(rep.sigma2_rhos) / reps);
  return rep;
}

struct CurvePoint {
  std::size_t n;
  double scaled_var_tau;
  double scaled_var_rho;
};

struct DegeneracyCurve {
  std::vector<CurvePoint> points;
  double slope_tau = 0.0;  // least-squares slope of log(scaled_var_tau) against log(n)
  double slope_rho = 0.0;
};

inline double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values) {
  const std::size_t m = ns.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (!(values[k] > 0.0)) throw Error(ErrorCode::BadParams, "log-log slope needs positive values");
    mx += std::log(ns[k]);
    my += std::log(values[k]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = std::log(ns[k]) - mx;
    sxy += dx * (std::log(values[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// The k-th sample size runs replicate_statistics with base seed derive_seed(base_seed, k).
inline DegeneracyCurve degeneracy_curve(const DistributionSpec& spec, const std::vector<std::size_t>& n_list,
                                        std::size_t reps, std::uint64_t base_seed, std::size_t threads = 0) {
  if (n_list.size() < 3) throw Error(ErrorCode::BadParams, "n_list needs at least three sizes");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
    throw Error(ErrorCode::BadParams, "n_list must be strictly increasing");
  DegeneracyCurve curve;
  std::vector<double> ns, vt, vr;
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    const auto rep = replicate_statistics(McConfig{spec, n_list[k], reps, derive_seed(base_seed, k), threads});
    curve.points.push_back({n_list[k], rep.scaled_var_tau, rep.scaled_var_rho});
    ns.push_back(static_cast<double>(n_list[k]));
    vt.push_back(rep.scaled_var_tau);
    vr.push_back(rep.scaled_var_rho);
  }
  curve.slope_tau = loglog_slope(ns, vt);
  curve.slope_rho = loglog_slope(ns, vr);
  return curve;
}

}  // namespace ndg
