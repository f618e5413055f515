#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "zdip/errors.hpp"
#include "zdip/parallel.hpp"
#include "zdip/sample.hpp"

namespace zdip {

struct DipResult {
  double dip = 0.0;
  std::int64_t modal_lo_index = 0;  // 0-based indices into the sorted sample
  std::int64_t modal_hi_index = 0;  // bounding the final modal interval
  std::int64_t n = 0;
};

// Reusable scratch space so batch callers pay no per-call allocations.
// x holds a 1-based copy of the sorted sample (x[0] unused); the index
// arrays mirror the classical algorithm's bookkeeping.
struct DipWorkspace {
  std::vector<double> x;
  std::vector<int> gcm, lcm;  // change-point stacks of the current fits
  std::vector<int> mn, mj;    // per-point predecessor / successor links

  void resize(int n) {
    x.resize(static_cast<std::size_t>(n) + 1);
    gcm.resize(static_cast<std::size_t>(n) + 1);
    lcm.resize(static_cast<std::size_t>(n) + 1);
    mn.resize(static_cast<std::size_t>(n) + 1);
    mj.resize(static_cast<std::size_t>(n) + 1);
  }
};

namespace detail {

// Dip statistic of a sorted array via iterative modal-interval refinement:
// fit the greatest convex minorant and least concave majorant over the
// current interval, take the largest ECDF deviation both inside and outside
// the candidate modal interval, then shrink the interval and repeat until
// no larger deviation can appear. Deviations are tracked in units of
// 2n*dip, so the floor value is 1 and the final division by 2n yields the
// statistic. O(n log n) overall; this routine itself is O(n) amortized per
// cycle, the caller's sort dominates.
inline DipResult dip_core(const double* sorted, int n, DipWorkspace& ws) {
  DipResult result;
  result.n = n;

  ws.resize(n);
  double* x = ws.x.data();  // 1-based view
  for (int i = 1; i <= n; ++i) x[i] = sorted[i - 1];

  int low = 1;
  int high = n;
  double dip_2n = 1.0;  // 1/(2n) floor in 2n units

  if (n < 2 || x[n] == x[1]) {
    result.dip = dip_2n / (2.0 * n);
    result.modal_lo_index = low - 1;
    result.modal_hi_index = high - 1;
    return result;
  }

  int* mn = ws.mn.data();
  int* mj = ws.mj.data();
  int* gcm = ws.gcm.data();
  int* lcm = ws.lcm.data();

  // mn[j]: index of the previous change point of the convex minorant fitted
  // to x[1..j]. Pop while the new point keeps the chain convex without the
  // intermediate one (slope comparison, cross-multiplied).
  mn[1] = 1;
  for (int j = 2; j <= n; ++j) {
    mn[j] = j - 1;
    for (;;) {
      const int mnj = mn[j];
      const int mnmnj = mn[mnj];
      if (mnj == 1 || (x[j] - x[mnj]) * (mnj - mnmnj) <
                          (x[mnj] - x[mnmnj]) * (j - mnj)) {
        break;
      }
      mn[j] = mnmnj;
    }
  }

  // mj[k]: index of the next change point of the concave majorant fitted to
  // x[k..n]; mirror image of the loop above.
  mj[n] = n;
  for (int k = n - 1; k >= 1; --k) {
    mj[k] = k + 1;
    for (;;) {
      const int mjk = mj[k];
      const int mjmjk = mj[mjk];
      if (mjk == n || (x[k] - x[mjk]) * (mjk - mjmjk) <
                          (x[mjk] - x[mjmjk]) * (k - mjk)) {
        break;
      }
      mj[k] = mjmjk;
    }
  }

  int ig = 1;  // gcm index of the modal interval's lower end candidate
  int ih = 1;  // lcm index of the upper end candidate

  for (;;) {
    // Change points of the minorant over [low, high], collected high -> low,
    // and of the majorant, collected low -> high.
    gcm[1] = high;
    int l_gcm = 1;
    while (gcm[l_gcm] > low) {
      gcm[l_gcm + 1] = mn[gcm[l_gcm]];
      ++l_gcm;
    }
    ig = l_gcm;
    int ix = l_gcm - 1;

    lcm[1] = low;
    int l_lcm = 1;
    while (lcm[l_lcm] < high) {
      lcm[l_lcm + 1] = mj[lcm[l_lcm]];
      ++l_lcm;
    }
    ih = l_lcm;
    int iv = 2;

    // Largest distance between the two fits over [low, high]; walking both
    // change-point lists in lockstep. Counts are exact integers, so only the
    // interpolation term is floating point (long double guards the
    // comparison against double-rounding flips).
    long double d = 0.0L;
    if (l_gcm != 2 || l_lcm != 2) {
      do {
        const int gcm_ix = gcm[ix];
        const int lcm_iv = lcm[iv];
        if (gcm_ix > lcm_iv) {
          // next touch point comes from the majorant list
          const int gcm_i1 = gcm[ix + 1];
          const long double dx =
              (lcm_iv - gcm_i1 + 1) -
              (static_cast<long double>(x[lcm_iv]) - x[gcm_i1]) *
                  (gcm_ix - gcm_i1) / (x[gcm_ix] - x[gcm_i1]);
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          // next touch point comes from the minorant list
          const int lcm_iv1 = lcm[iv - 1];
          const long double dx =
              (static_cast<long double>(x[gcm_ix]) - x[lcm_iv1]) *
                  (lcm_iv - lcm_iv1) / (x[lcm_iv] - x[lcm_iv1]) -
              (gcm_ix - lcm_iv1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > l_lcm) iv = l_lcm;
      } while (gcm[ix] != lcm[iv]);
    } else {
      d = 1.0L;  // both fits are single segments; no interior deviation
    }

    if (d < dip_2n) break;

    // Deviation of the ECDF from the convex minorant below the modal
    // interval: per minorant segment, the largest amount by which a step of
    // the ECDF overshoots the segment's chord.
    double dip_lower = 0.0;
    for (int j = ig; j < l_gcm; ++j) {
      double max_t = 1.0;
      const int jb = gcm[j + 1];
      const int je = gcm[j];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double c = (je - jb) / (x[je] - x[jb]);
        for (int jj = jb; jj <= je; ++jj) {
          const double t = (jj - jb + 1) - (x[jj] - x[jb]) * c;
          if (max_t < t) max_t = t;
        }
      }
      if (dip_lower < max_t) dip_lower = max_t;
    }

    // Mirror image above the modal interval, against the concave majorant.
    double dip_upper = 0.0;
    for (int j = ih; j < l_lcm; ++j) {
      double max_t = 1.0;
      const int jb = lcm[j];
      const int je = lcm[j + 1];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double c = (je - jb) / (x[je] - x[jb]);
        for (int jj = jb; jj <= je; ++jj) {
          const double t = (x[jj] - x[jb]) * c - (jj - jb - 1);
          if (max_t < t) max_t = t;
        }
      }
      if (dip_upper < max_t) dip_upper = max_t;
    }

    const double dip_new = (dip_upper > dip_lower) ? dip_upper : dip_lower;
    if (dip_2n < dip_new) dip_2n = dip_new;

    // A stalled modal interval would recompute identical fits forever.
    if (low == gcm[ig] && high == lcm[ih]) break;
    low = gcm[ig];
    high = lcm[ih];
  }

  result.dip = dip_2n / (2.0 * n);
  result.modal_lo_index = low - 1;
  result.modal_hi_index = high - 1;
  return result;
}

}  // namespace detail

inline DipResult dip(const Sample& sample, DipWorkspace& ws) {
  const std::int64_t n = sample.size();
  if (n < 2) throw SampleTooSmall(n, 2);
  if (n >= std::numeric_limits<int>::max()) {
    throw Error("sample size " + std::to_string(n) +
                " exceeds the supported maximum");
  }
  return detail::dip_core(sample.values().data(), static_cast<int>(n), ws);
}

inline DipResult dip(const Sample& sample) {
  DipWorkspace ws;
  return dip(sample, ws);
}

// Order-preserving batch evaluation; may run on several threads internally
// but is observably identical to the sequential loop (per-sample errors are
// reported for the lowest failing index).
inline std::vector<DipResult> dip_batch(
    const std::vector<Sample>& samples,
    unsigned n_threads = default_thread_count()) {
  std::vector<DipResult> results(samples.size());
  if (samples.empty()) return results;
  std::vector<DipWorkspace> workspaces(
      std::max<unsigned>(1u, std::min<std::uint64_t>(n_threads, samples.size())));
  parallel_for(static_cast<std::int64_t>(samples.size()), n_threads,
               [&](std::int64_t i, unsigned slot) {
                 try {
                   results[static_cast<std::size_t>(i)] =
                       dip(samples[static_cast<std::size_t>(i)], workspaces[slot]);
                 } catch (const Error& e) {
                   throw BatchItemError(static_cast<std::size_t>(i), e.what());
                 }
               });
  return results;
}

}  // namespace zdip
