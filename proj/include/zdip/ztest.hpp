#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "zdip/dip.hpp"
#include "zdip/errors.hpp"
#include "zdip/null_table.hpp"
#include "zdip/random.hpp"
#include "zdip/sample.hpp"

namespace zdip {

// Decision threshold on the standardized dip; calibrated so the null
// rejection rate stays at or below 5% across sample sizes.
inline constexpr double default_threshold = 1.975;

struct ZDipReport {
  std::int64_t n = 0;
  double dip = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  std::optional<double> p_value;
  double threshold = default_threshold;
  bool is_multimodal = false;
  bool extrapolated = false;
  std::int64_t iterations = 1;        // 1 for a plain test
  std::vector<double> per_iteration_z;  // always non-empty; {z} when plain
};

struct DownsampleConfig {
  std::int64_t subsample_size = 100;
  std::int64_t iterations = 30;
  std::uint64_t seed = 0;
};

// Standardized dip test of one sample against the null table.
// For plain reports z == (dip - mu) / sigma holds exactly.
inline ZDipReport zdip(const Sample& sample, const NullTable& table,
                       double threshold = default_threshold) {
  if (sample.size() < 4) throw SampleTooSmall(sample.size(), 4);
  const DipResult d = dip(sample);
  const NullLookup look = get_summary(table, sample.size());
  ZDipReport report;
  report.n = sample.size();
  report.dip = d.dip;
  report.mu = look.mu;
  report.sigma = look.sigma;
  report.z = (d.dip - look.mu) / look.sigma;
  report.threshold = threshold;
  report.is_multimodal = report.z > threshold;
  report.extrapolated = look.extrapolated;
  report.iterations = 1;
  report.per_iteration_z = {report.z};
  return report;
}

// Add-one Monte Carlo p-value against a sorted null dip ensemble:
// (1 + #{null >= observed}) / (R + 1), always in (0, 1].
inline double reference_p_value(double dip_observed,
                                const std::vector<double>& sorted_null_dips) {
  if (sorted_null_dips.empty()) throw EmptyInput("null dip ensemble is empty");
  const auto it = std::lower_bound(sorted_null_dips.begin(),
                                   sorted_null_dips.end(), dip_observed);
  const auto count_ge =
      static_cast<double>(sorted_null_dips.end() - it);
  return (1.0 + count_ge) / (static_cast<double>(sorted_null_dips.size()) + 1.0);
}

// Monte Carlo p-value with a freshly simulated null ensemble at the sample's
// own size. Accepts replicates >= 1; the add-one convention keeps the
// estimate strictly positive either way.
inline double dip_p_value(const Sample& sample, std::int64_t replicates,
                          std::uint64_t seed,
                          unsigned n_threads = default_thread_count()) {
  if (sample.size() < 4) throw SampleTooSmall(sample.size(), 4);
  if (replicates < 1) throw InvalidReplicates(replicates, 1);
  const double observed = dip(sample).dip;
  const std::vector<double> nulls =
      detail::null_dips(sample.size(), replicates, seed, n_threads);
  std::int64_t count_ge = 0;
  for (double d : nulls) {
    if (d >= observed) ++count_ge;
  }
  return (1.0 + static_cast<double>(count_ge)) /
         (static_cast<double>(replicates) + 1.0);
}

// Downsampled test for very large N: z values from `iterations` subsets of
// size subsample_size drawn without replacement are averaged, which removes
// the sample-size dependence of a single huge-N dip. Falls back to the plain
// test when the sample is not larger than the subsample size.
inline ZDipReport downsampled_zdip(const Sample& sample, const NullTable& table,
                                   const DownsampleConfig& config,
                                   double threshold = default_threshold) {
  if (sample.size() < 4) throw SampleTooSmall(sample.size(), 4);
  if (config.subsample_size < 4) {
    throw InvalidGridPoint(config.subsample_size,
                           "subsample size must be at least 4");
  }
  if (config.iterations < 1) throw InvalidReplicates(config.iterations, 1);
  if (sample.size() <= config.subsample_size) {
    return zdip(sample, table, threshold);
  }

  const NullLookup look = get_summary(table, config.subsample_size);
  const std::int64_t n = sample.size();
  const auto k = static_cast<std::size_t>(config.subsample_size);
  const std::vector<double>& values = sample.values();

  std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
  std::vector<double> subset(k);
  DipWorkspace ws;
  std::vector<double> zs;
  zs.reserve(static_cast<std::size_t>(config.iterations));
  long double z_acc = 0.0L, dip_acc = 0.0L;

  for (std::int64_t i = 0; i < config.iterations; ++i) {
    RandomStream stream(derive_seed(config.seed, "subsample",
                                    static_cast<std::uint64_t>(i)));
    std::iota(pool.begin(), pool.end(), std::int64_t{0});
    // partial Fisher-Yates: after j steps the prefix is a uniform draw
    // without replacement
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint64_t offset =
          stream.below(static_cast<std::uint64_t>(n) - j);
      std::swap(pool[j], pool[j + static_cast<std::size_t>(offset)]);
    }
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t j = 0; j < k; ++j) {
      subset[j] = values[static_cast<std::size_t>(pool[j])];
    }
    // indices are sorted and the sample is sorted, so subset is sorted
    const double d = detail::dip_core(subset.data(), static_cast<int>(k), ws).dip;
    const double z = (d - look.mu) / look.sigma;
    zs.push_back(z);
    z_acc += z;
    dip_acc += d;
  }

  ZDipReport report;
  report.n = n;
  report.dip = static_cast<double>(dip_acc / config.iterations);
  report.mu = look.mu;
  report.sigma = look.sigma;
  report.z = static_cast<double>(z_acc / config.iterations);
  report.threshold = threshold;
  report.is_multimodal = report.z > threshold;
  report.extrapolated = look.extrapolated;
  report.iterations = config.iterations;
  report.per_iteration_z = std::move(zs);
  return report;
}

}  // namespace zdip
