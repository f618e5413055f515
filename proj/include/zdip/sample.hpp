#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "zdip/errors.hpp"

namespace zdip {

// A validated, sorted set of observations. Construct via canonicalize()
// (validates and sorts) or from_sorted() (caller guarantees order; still
// validated). Values are immutable afterwards.
class Sample {
 public:
  const std::vector<double>& values() const { return values_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  bool is_sorted() const { return true; }

  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  friend Sample canonicalize(std::vector<double> raw);
  friend Sample from_sorted(std::vector<double> sorted);

 private:
  explicit Sample(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

namespace detail {
inline void validate_finite(const std::vector<double>& v) {
  if (v.empty()) throw EmptyInput();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw NonFiniteValue(i);
  }
}
}  // namespace detail

// Validates and sorts. Duplicates are preserved: a k-fold tie is a k/n jump
// of the empirical CDF, not an error.
inline Sample canonicalize(std::vector<double> raw) {
  detail::validate_finite(raw);
  std::sort(raw.begin(), raw.end());
  return Sample(std::move(raw));
}

// Same contract, but skips the sort when the input is already
// non-decreasing (verified; falls back to sorting otherwise).
inline Sample from_sorted(std::vector<double> sorted) {
  detail::validate_finite(sorted);
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    std::sort(sorted.begin(), sorted.end());
  }
  return Sample(std::move(sorted));
}

}  // namespace zdip
