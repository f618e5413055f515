#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "zdip/errors.hpp"
#include "zdip/null_table.hpp"
#include "zdip/parallel.hpp"
#include "zdip/random.hpp"

namespace zdip {

struct ThresholdEstimate {
  std::int64_t n = 0;
  double z_at_p05 = 0.0;  // 95th percentile of null z
  double ci_low = 0.0;    // bootstrap 95% interval, always brackets z_at_p05
  double ci_high = 0.0;
  std::int64_t ensemble_size = 0;
  std::int64_t bootstrap_rounds = 0;
  std::uint64_t seed = 0;
};

// Linear-interpolation quantile of an ascending vector (the convention used
// by R's default and NumPy's "linear"): h = (m-1)p, v[lo] + frac*(v[lo+1]-v[lo]).
inline double sorted_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw EmptyInput("quantile of an empty vector");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace detail {

// Same quantile on an unsorted buffer, destructively, via selection instead
// of a full sort. The element after the lo-th order statistic is the minimum
// of the upper partition.
inline double partial_quantile(std::vector<double>& buf, double p) {
  const double h = static_cast<double>(buf.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(lo);
  std::nth_element(buf.begin(), mid, buf.end());
  const double v_lo = *mid;
  if (frac == 0.0 || lo + 1 >= buf.size()) return v_lo;
  const double v_hi = *std::min_element(mid + 1, buf.end());
  return v_lo + frac * (v_hi - v_lo);
}

}  // namespace detail

// Empirical 95th percentile of null z at size n, with a percentile-bootstrap
// confidence interval. Deterministic in (table, n, sizes, seed).
inline ThresholdEstimate calibrate_threshold(
    const NullTable& table, std::int64_t n, std::int64_t ensemble_size,
    std::int64_t bootstrap_rounds, std::uint64_t seed,
    unsigned n_threads = default_thread_count()) {
  if (n < 4) throw InvalidGridPoint(n);
  if (ensemble_size < 100) {
    throw InsufficientEnsemble(ensemble_size, 100, "calibration ensemble");
  }
  if (bootstrap_rounds < 100) {
    throw InsufficientEnsemble(bootstrap_rounds, 100, "bootstrap rounds");
  }

  const NullLookup look = get_summary(table, n);
  const std::vector<double> dips =
      detail::null_dips(n, ensemble_size, seed, n_threads);
  std::vector<double> zs(dips.size());
  for (std::size_t i = 0; i < dips.size(); ++i) {
    zs[i] = (dips[i] - look.mu) / look.sigma;
  }
  std::sort(zs.begin(), zs.end());
  const double point = sorted_quantile(zs, 0.95);

  const auto e = static_cast<std::uint64_t>(ensemble_size);
  std::vector<double> boot(static_cast<std::size_t>(bootstrap_rounds));
  struct Scratch {
    std::vector<double> resample;
  };
  const unsigned n_slots = static_cast<unsigned>(std::max<std::int64_t>(
      1, std::min<std::int64_t>(n_threads, bootstrap_rounds)));
  std::vector<Scratch> scratch(n_slots);
  parallel_for(bootstrap_rounds, n_threads, [&](std::int64_t r, unsigned slot) {
    std::vector<double>& resample = scratch[slot].resample;
    resample.resize(zs.size());
    RandomStream stream(derive_seed(seed, "bootstrap",
                                    static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(r)));
    for (double& v : resample) v = zs[stream.below(e)];
    boot[static_cast<std::size_t>(r)] = detail::partial_quantile(resample, 0.95);
  });
  std::sort(boot.begin(), boot.end());

  ThresholdEstimate est;
  est.n = n;
  est.z_at_p05 = point;
  est.ci_low = std::min(sorted_quantile(boot, 0.025), point);
  est.ci_high = std::max(sorted_quantile(boot, 0.975), point);
  est.ensemble_size = ensemble_size;
  est.bootstrap_rounds = bootstrap_rounds;
  est.seed = seed;
  return est;
}

// Single size-independent cutoff: the largest upper confidence bound across
// the calibrated sizes, rounded up to the next multiple of 0.005. The small
// backoff keeps values that already sit on a multiple from being pushed a
// full step up by representation error.
inline double universal_cutoff(const std::vector<ThresholdEstimate>& estimates) {
  if (estimates.empty()) throw EmptyInput("no threshold estimates");
  double max_hi = estimates.front().ci_high;
  for (const ThresholdEstimate& e : estimates) {
    max_hi = std::max(max_hi, e.ci_high);
  }
  const auto steps = static_cast<std::int64_t>(std::ceil(max_hi * 200.0 - 1e-9));
  return static_cast<double>(steps) / 200.0;
}

}  // namespace zdip
