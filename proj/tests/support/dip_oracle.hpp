#pragma once

// Brute-force dip oracle, independent of the fast GCM/LCM implementation.
//
// The dip statistic is min over unimodal CDFs G of sup |F_n - G|, where a
// unimodal CDF is convex up to some mode m and concave after it (a jump is
// possible only at m). For the minimization it suffices to consider modes at
// the distinct sample values: for a mode strictly between two data values at
// sup-distance d, at least one of the two flanking data-value modes admits a
// G at the same d (chord argument on the crossing segment), and a mode
// outside the data range reduces to the nearest extreme value.
//
// For a fixed mode, the minimal d is a linear program:
//   variables: d; G at each distinct value left of the mode; the left limit
//   lambda = G(m^-); rho = G(m); G at each distinct value right of the mode.
//   constraints (v_u = distinct values, c_u = cumulative counts, c_-1 = 0):
//     value gates     G(v_u) >= c_u/n - d   and  G(v_u) <= c_{u-1}/n + d
//                     (the upper gate bounds the left limit at v_u, equal to
//                     the value by continuity off the mode; at the mode it
//                     applies to lambda instead, and rho additionally obeys
//                     |c_t/n - rho| <= d)
//     jump at mode    lambda <= rho
//     left chain      convexity triples + first slope >= 0   (monotone)
//     right chain     concavity triples + last slope >= 0    (monotone)
//     bounds          all values in [0, 1], d >= 0
//   The CDF tails (G -> 0 left, G -> 1 right) add nothing: any chain
//   solution can be tilted by an arbitrarily small linear term anchored at
//   the mode to make the boundary slopes strictly positive, so the optimum
//   value is unchanged.
//
// The reported oracle value is max(1/(2n), min over modes), matching the
// classical convention that the sample dip is floored at 1/(2n) (for a
// sample with one distinct value the unfloored infimum is 0).
//
// Scalar = double gives a fast prescreen; Scalar = boost cpp_rational gives
// the exact optimum (inputs convert from double exactly).

#include <algorithm>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simplex.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct DistinctValues {
  std::vector<double> values;      // strictly increasing
  std::vector<std::int64_t> cum;   // cumulative counts; cum.back() == n
};

inline DistinctValues distinct_values(const std::vector<double>& sorted) {
  DistinctValues d;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (d.values.empty() || sorted[i] != d.values.back()) {
      d.values.push_back(sorted[i]);
      d.cum.push_back(static_cast<std::int64_t>(i) + 1);
    } else {
      d.cum.back() = static_cast<std::int64_t>(i) + 1;
    }
  }
  return d;
}

// Minimal sup-distance for the mode at distinct-value index t.
template <typename Scalar>
Scalar mode_lp(const DistinctValues& dv, std::size_t t) {
  const std::size_t m = dv.values.size();
  const auto n = static_cast<std::int64_t>(dv.cum.back());
  const std::size_t n_vars = m + 2;  // d, left values, lambda, rho, right values

  // Column of G's value at distinct index u (lambda for the mode's left limit).
  const std::size_t col_d = 0;
  const std::size_t col_lambda = 1 + t;
  const std::size_t col_rho = 2 + t;
  auto col_left = [&](std::size_t u) { return 1 + u; };   // u < t
  auto col_right = [&](std::size_t u) { return 2 + u; };  // u > t

  auto frac = [&](std::int64_t count) { return Scalar(count) / Scalar(n); };
  auto cum_before = [&](std::size_t u) {
    return u == 0 ? std::int64_t{0} : dv.cum[u - 1];
  };

  DenseSimplex<Scalar> lp(n_vars);
  auto row = [&]() { return std::vector<Scalar>(n_vars, Scalar(0)); };

  {  // lambda <= rho
    auto r = row();
    r[col_lambda] = Scalar(1);
    r[col_rho] = Scalar(-1);
    lp.add_le(std::move(r), Scalar(0));
  }
  auto add_gates = [&](std::size_t col, std::int64_t lower_count,
                       std::int64_t upper_count) {
    auto hi = row();
    hi[col] = Scalar(1);
    hi[col_d] = Scalar(-1);
    lp.add_le(std::move(hi), frac(upper_count));
    auto lo = row();
    lo[col] = Scalar(-1);
    lo[col_d] = Scalar(-1);
    lp.add_le(std::move(lo), -frac(lower_count));
  };
  for (std::size_t u = 0; u < t; ++u) add_gates(col_left(u), dv.cum[u], cum_before(u));
  {  // lambda: only the upper gate binds (the lower side is carried by the
     // previous value's gate plus monotonicity)
    auto hi = row();
    hi[col_lambda] = Scalar(1);
    hi[col_d] = Scalar(-1);
    lp.add_le(std::move(hi), frac(cum_before(t)));
  }
  add_gates(col_rho, dv.cum[t], dv.cum[t]);
  for (std::size_t u = t + 1; u < m; ++u) add_gates(col_right(u), dv.cum[u], dv.cum[u - 1]);
  {  // last value of G bounded by 1
    auto r = row();
    r[t + 1 == m ? col_rho : col_right(m - 1)] = Scalar(1);
    lp.add_le(std::move(r), Scalar(1));
  }

  // Left chain: points (v_0 .. v_{t-1}, v_t) with heights (L_0..L_{t-1}, lambda).
  {
    std::vector<std::size_t> cols;
    for (std::size_t u = 0; u < t; ++u) cols.push_back(col_left(u));
    cols.push_back(col_lambda);
    if (cols.size() >= 2) {  // first slope >= 0 makes the convex chain monotone
      auto r = row();
      r[cols[0]] = Scalar(1);
      r[cols[1]] = Scalar(-1);
      lp.add_le(std::move(r), Scalar(0));
    }
    for (std::size_t p = 0; p + 2 < cols.size(); ++p) {
      // slope(p, p+1) <= slope(p+1, p+2), cross-multiplied by positive gaps
      const Scalar g1 = Scalar(dv.values[p + 1]) - Scalar(dv.values[p]);
      const Scalar g2 = Scalar(dv.values[p + 2]) - Scalar(dv.values[p + 1]);
      auto r = row();
      r[cols[p]] = -g2;
      r[cols[p + 1]] = g2 + g1;
      r[cols[p + 2]] = -g1;
      lp.add_le(std::move(r), Scalar(0));
    }
  }

  // Right chain: points (v_t, v_{t+1} .. v_{M-1}) with heights (rho, R...).
  {
    std::vector<std::size_t> cols;
    cols.push_back(col_rho);
    for (std::size_t u = t + 1; u < m; ++u) cols.push_back(col_right(u));
    if (cols.size() >= 2) {  // last slope >= 0 makes the concave chain monotone
      auto r = row();
      r[cols[cols.size() - 2]] = Scalar(1);
      r[cols[cols.size() - 1]] = Scalar(-1);
      lp.add_le(std::move(r), Scalar(0));
    }
    for (std::size_t p = 0; p + 2 < cols.size(); ++p) {
      const std::size_t base = t + p;  // coord of cols[p] is dv.values[base]
      const Scalar g1 = Scalar(dv.values[base + 1]) - Scalar(dv.values[base]);
      const Scalar g2 = Scalar(dv.values[base + 2]) - Scalar(dv.values[base + 1]);
      auto r = row();
      r[cols[p]] = g2;
      r[cols[p + 1]] = -(g2 + g1);
      r[cols[p + 2]] = g1;
      lp.add_le(std::move(r), Scalar(0));
    }
  }

  std::vector<Scalar> objective(n_vars, Scalar(0));
  objective[col_d] = Scalar(1);
  auto result = lp.minimize(objective);
  // Always feasible (d = 1 with a flat chain satisfies everything).
  assert(result.status == DenseSimplex<Scalar>::Status::kOptimal);
  return result.objective;
}

// Oracle dip over all candidate modes; Scalar picks the arithmetic.
template <typename Scalar>
Scalar dip_oracle(const std::vector<double>& sorted) {
  const DistinctValues dv = distinct_values(sorted);
  const auto n = static_cast<std::int64_t>(sorted.size());
  const Scalar floor_value = Scalar(1) / Scalar(2 * n);
  if (dv.values.size() < 2) return floor_value;
  Scalar best = mode_lp<Scalar>(dv, 0);
  for (std::size_t t = 1; t < dv.values.size(); ++t) {
    const Scalar cand = mode_lp<Scalar>(dv, t);
    if (cand < best) best = cand;
  }
  return best < floor_value ? floor_value : best;
}

inline double dip_oracle_double(const std::vector<double>& sorted) {
  return dip_oracle<double>(sorted);
}

inline double dip_oracle_exact(const std::vector<double>& sorted) {
  return dip_oracle<Rational>(sorted).convert_to<double>();
}

// Exact LP restricted to modes that the double prescreen says are within
// `margin` of optimal; exact everywhere the exactness can matter.
inline double dip_oracle_exact_pruned(const std::vector<double>& sorted,
                                      double margin = 1e-6) {
  const DistinctValues dv = distinct_values(sorted);
  const auto n = static_cast<std::int64_t>(sorted.size());
  const Rational floor_value = Rational(1) / Rational(2 * n);
  if (dv.values.size() < 2) return floor_value.convert_to<double>();

  std::vector<double> screen(dv.values.size());
  double best_screen = 0.0;
  for (std::size_t t = 0; t < dv.values.size(); ++t) {
    screen[t] = mode_lp<double>(dv, t);
    if (t == 0 || screen[t] < best_screen) best_screen = screen[t];
  }
  bool have_best = false;
  Rational best;
  for (std::size_t t = 0; t < dv.values.size(); ++t) {
    if (screen[t] > best_screen + margin) continue;
    const Rational cand = mode_lp<Rational>(dv, t);
    if (!have_best || cand < best) {
      best = cand;
      have_best = true;
    }
  }
  if (best < floor_value) best = floor_value;
  return best.convert_to<double>();
}

}  // namespace oracle
