#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zdip/errors.hpp"
#include "zdip/random.hpp"
#include "zdip/sample.hpp"

namespace zdip {

// Gaussian mixture: component k has mean means[k], standard deviation
// stdevs[k], and weight weights[k]; weights sum to 1 within 1e-12.
struct MixtureSpec {
  std::vector<double> means;
  std::vector<double> stdevs;
  std::vector<double> weights;
};

inline void validate(const MixtureSpec& spec) {
  const std::size_t k = spec.means.size();
  if (k == 0) throw InvalidMixture("mixture needs at least one component");
  if (spec.stdevs.size() != k || spec.weights.size() != k) {
    throw InvalidMixture("means, stdevs, and weights must have equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(spec.means[i])) {
      throw InvalidMixture("component " + std::to_string(i) +
                           " has a non-finite mean");
    }
    if (!std::isfinite(spec.stdevs[i]) || !(spec.stdevs[i] > 0.0)) {
      throw InvalidMixture("component " + std::to_string(i) +
                           " must have a positive standard deviation");
    }
    if (!std::isfinite(spec.weights[i]) || spec.weights[i] < 0.0) {
      throw InvalidMixture("component " + std::to_string(i) +
                           " must have a non-negative weight");
    }
    total += spec.weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidMixture("weights must sum to 1");
  }
}

// Named generators used throughout the validation experiments. The values
// are part of the tool's contract; results quoted elsewhere assume them.
inline MixtureSpec preset(std::string_view name) {
  if (name == "unimodal") {
    return MixtureSpec{{-0.3, -0.3}, {0.1, 0.1}, {1.0, 0.0}};
  }
  if (name == "weak_bimodal") {
    return MixtureSpec{{-0.6, 0.6}, {0.15, 0.15}, {0.7, 0.3}};
  }
  if (name == "strong_bimodal") {
    return MixtureSpec{{-0.6, 0.6}, {0.1, 0.1}, {0.5, 0.5}};
  }
  if (name == "trimodal") {
    return MixtureSpec{{-0.75, 0.0, 0.75},
                       {0.1, 0.1, 0.1},
                       {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  }
  if (name == "negligible_mode") {
    return MixtureSpec{{-0.6, 0.6}, {0.1, 0.2}, {0.975, 0.025}};
  }
  throw UnknownPreset(std::string(name));
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "unimodal", "weak_bimodal", "strong_bimodal", "trimodal",
      "negligible_mode"};
  return names;
}

namespace detail {

inline Sample sample_mixture_impl(const MixtureSpec& spec, std::int64_t n,
                                  std::uint64_t seed,
                                  std::vector<std::int64_t>* component_counts) {
  validate(spec);
  if (n < 1) throw InvalidMixture("sample size must be at least 1");
  const std::size_t k = spec.means.size();

  std::vector<double> cum(k);
  double running = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    running += spec.weights[i];
    cum[i] = running;
  }
  // Rounding can leave cum[k-1] slightly under 1; a draw past it must fall
  // back to a component with positive weight, never a zero-weight tail.
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (spec.weights[i] > 0.0) last_positive = i;
  }

  if (component_counts) component_counts->assign(k, 0);
  RandomStream stream(
      derive_seed(seed, "mixture", static_cast<std::uint64_t>(n)));
  std::vector<double> values(static_cast<std::size_t>(n));
  for (double& v : values) {
    const double u = stream.uniform01();
    std::size_t component = last_positive;
    for (std::size_t i = 0; i < k; ++i) {
      if (u < cum[i]) {
        component = i;
        break;
      }
    }
    v = spec.means[component] + spec.stdevs[component] * stream.normal01();
    if (component_counts) ++(*component_counts)[component];
  }
  return canonicalize(std::move(values));
}

}  // namespace detail

// Deterministic draw of n values. The stream depends only on (seed, n),
// never on the component parameters, so the same call always yields the
// same sample.
inline Sample sample_mixture(const MixtureSpec& spec, std::int64_t n,
                             std::uint64_t seed) {
  return detail::sample_mixture_impl(spec, n, seed, nullptr);
}

// Same draw, also reporting how many values each component produced.
inline Sample sample_mixture_counted(const MixtureSpec& spec, std::int64_t n,
                                     std::uint64_t seed,
                                     std::vector<std::int64_t>& component_counts) {
  return detail::sample_mixture_impl(spec, n, seed, &component_counts);
}

}  // namespace zdip
