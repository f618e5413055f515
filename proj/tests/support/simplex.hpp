#pragma once

// Small dense two-phase simplex for the brute-force dip oracle.
//
// Solves  minimize c.x  subject to  A.x <= b,  x >= 0.
// Bland's rule for both the entering and the leaving choice, so the method
// terminates without anti-cycling perturbations. Works for Scalar = double
// (epsilon-guarded comparisons, used as a fast prescreen) and for an exact
// rational type (epsilon 0, bit-true optimum). Problem sizes here are tiny
// (<= ~15 variables, ~45 rows), so no effort is spent on sparsity.

#include <cassert>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace oracle {

template <typename Scalar>
struct SimplexEps {
  // Exact types compare against zero.
  static Scalar value() { return Scalar(0); }
};

template <>
struct SimplexEps<double> {
  static double value() { return 1e-9; }
};

template <typename Scalar>
class DenseSimplex {
 public:
  enum class Status { kOptimal, kInfeasible, kUnbounded };

  struct Result {
    Status status = Status::kInfeasible;
    Scalar objective = Scalar(0);
    std::vector<Scalar> x;
  };

  explicit DenseSimplex(std::size_t n_vars) : n_vars_(n_vars) {}

  // Adds the constraint  coeffs . x <= rhs.
  void add_le(std::vector<Scalar> coeffs, Scalar rhs) {
    assert(coeffs.size() == n_vars_);
    rows_.push_back(std::move(coeffs));
    rhs_.push_back(std::move(rhs));
  }

  Result minimize(const std::vector<Scalar>& objective) {
    assert(objective.size() == n_vars_);
    const Scalar eps = SimplexEps<Scalar>::value();
    const std::size_t m = rows_.size();

    std::size_t n_art = 0;
    for (const Scalar& b : rhs_) {
      if (b < Scalar(0)) ++n_art;
    }
    const std::size_t art_begin = n_vars_ + m;
    const std::size_t n_cols = n_vars_ + m + n_art + 1;  // [x | s | a | rhs]
    const std::size_t rhs_col = n_cols - 1;

    tableau_.assign(m, std::vector<Scalar>(n_cols, Scalar(0)));
    basis_.assign(m, 0);

    std::size_t next_art = art_begin;
    for (std::size_t i = 0; i < m; ++i) {
      const bool flip = rhs_[i] < Scalar(0);
      for (std::size_t j = 0; j < n_vars_; ++j) {
        tableau_[i][j] = flip ? -rows_[i][j] : rows_[i][j];
      }
      tableau_[i][n_vars_ + i] = flip ? Scalar(-1) : Scalar(1);
      tableau_[i][rhs_col] = flip ? -rhs_[i] : rhs_[i];
      if (flip) {
        tableau_[i][next_art] = Scalar(1);
        basis_[i] = next_art++;
      } else {
        basis_[i] = n_vars_ + i;
      }
    }

    Result result;

    if (n_art > 0) {
      // Phase 1: minimize the sum of artificials.
      std::vector<Scalar> phase1_cost(n_cols - 1, Scalar(0));
      for (std::size_t j = art_begin; j < n_cols - 1; ++j) {
        phase1_cost[j] = Scalar(1);
      }
      build_cost_row(phase1_cost);
      if (!run(art_begin, eps)) {
        result.status = Status::kUnbounded;  // cannot happen: bounded below by 0
        return result;
      }
      const Scalar infeas = -cost_[rhs_col];
      if (infeas > feasibility_tolerance()) {
        result.status = Status::kInfeasible;
        return result;
      }
      // Pivot still-basic artificials out where a real column allows it;
      // a row with no real nonzero is redundant and its artificial stays
      // pinned at zero (the ratio test keeps it there).
      for (std::size_t i = 0; i < m; ++i) {
        if (basis_[i] < art_begin) continue;
        for (std::size_t j = 0; j < art_begin; ++j) {
          Scalar a = tableau_[i][j];
          if (a < Scalar(0)) a = -a;
          if (a > eps) {
            pivot(i, j);
            break;
          }
        }
      }
    }

    std::vector<Scalar> phase2_cost(n_cols - 1, Scalar(0));
    for (std::size_t j = 0; j < n_vars_; ++j) phase2_cost[j] = objective[j];
    build_cost_row(phase2_cost);
    if (!run(art_begin, eps)) {
      result.status = Status::kUnbounded;
      return result;
    }

    result.status = Status::kOptimal;
    result.objective = -cost_[rhs_col];
    result.x.assign(n_vars_, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] < n_vars_) result.x[basis_[i]] = tableau_[i][rhs_col];
    }
    return result;
  }

 private:
  static Scalar feasibility_tolerance() {
    if constexpr (std::is_same_v<Scalar, double>) {
      return 1e-7;
    } else {
      return Scalar(0);
    }
  }

  // cost_[j] = c_j - c_B . B^-1 A_j (reduced costs); cost_[rhs] = -objective.
  void build_cost_row(const std::vector<Scalar>& cost_per_column) {
    const std::size_t n_cols = tableau_.empty() ? cost_per_column.size() + 1
                                                : tableau_[0].size();
    cost_.assign(n_cols, Scalar(0));
    for (std::size_t j = 0; j + 1 < n_cols; ++j) cost_[j] = cost_per_column[j];
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      const Scalar cb = cost_per_column[basis_[i]];
      if (cb == Scalar(0)) continue;
      for (std::size_t j = 0; j < n_cols; ++j) {
        cost_[j] -= cb * tableau_[i][j];
      }
    }
  }

  // Bland's rule simplex sweep. Artificial columns never re-enter.
  // Returns false on unboundedness.
  bool run(std::size_t art_begin, const Scalar& eps) {
    const std::size_t rhs_col = tableau_.empty() ? 0 : tableau_[0].size() - 1;
    for (;;) {
      std::size_t enter = art_begin;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (cost_[j] < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == art_begin) return true;  // optimal

      std::size_t leave = tableau_.size();
      for (std::size_t i = 0; i < tableau_.size(); ++i) {
        if (tableau_[i][enter] > eps) {
          if (leave == tableau_.size()) {
            leave = i;
            continue;
          }
          // ratio_i < ratio_leave, cross-multiplied (both pivots positive)
          const Scalar lhs = tableau_[i][rhs_col] * tableau_[leave][enter];
          const Scalar rhs = tableau_[leave][rhs_col] * tableau_[i][enter];
          if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) {
            leave = i;
          }
        }
      }
      if (leave == tableau_.size()) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const Scalar piv = tableau_[row][col];
    for (Scalar& v : tableau_[row]) v /= piv;
    tableau_[row][col] = Scalar(1);
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (i == row) continue;
      const Scalar f = tableau_[i][col];
      if (f == Scalar(0)) continue;
      for (std::size_t j = 0; j < tableau_[i].size(); ++j) {
        tableau_[i][j] -= f * tableau_[row][j];
      }
      tableau_[i][col] = Scalar(0);
    }
    const Scalar fc = cost_[col];
    if (fc != Scalar(0)) {
      for (std::size_t j = 0; j < cost_.size(); ++j) {
        cost_[j] -= fc * tableau_[row][j];
      }
      cost_[col] = Scalar(0);
    }
    basis_[row] = col;
  }

  std::size_t n_vars_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<Scalar> rhs_;
  std::vector<std::vector<Scalar>> tableau_;
  std::vector<Scalar> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace oracle
