#pragma once

// Phase-1 simplex for the feasibility problem  A x = b, x >= 0.

#include <optional>
#include <vector>

#include "shadowlab/linalg.hpp"

namespace shadowlab {

template <class T>
struct FeasibilityResult {
  bool feasible = false;
  Vector<T> x;       // final basic solution (feasible when `feasible`)
  Vector<T> farkas;  // f with f^T A >= 0 and f^T b < 0 when infeasible
  T infeasibility{0};  // optimal phase-1 objective
};

namespace detail {

template <class T>
bool lp_negative(const T& v, double tol) {
  return sign_of(v, tol) < 0;
}

template <class T>
bool lp_positive(const T& v, double tol) {
  return sign_of(v, tol) > 0;
}

}  // namespace detail

/// Exact scalars use Bland's rule, so the method terminates.
/// `tol` is the pivot and feasibility tolerance and is ignored for exact
/// scalars.
template <class T>
FeasibilityResult<T> solve_feasibility(const Matrix<T>& a, const Vector<T>& b, double tol = 1e-12) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::Index width = n + m + 1;
  const double t = is_exact_v<T> ? 0.0 : tol;
  const double pivot_tol = is_exact_v<T> ? 0.0 : std::max(tol, 1e-9);

  // Rows are flipped so the right-hand side is nonnegative; the flips are
  // undone on the dual vector at the end.
  std::vector<int> flip(static_cast<std::size_t>(m), 1);
  Matrix<T> tab = Matrix<T>::Zero(m + 1, width);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (sign_of(b(i)) < 0) flip[static_cast<std::size_t>(i)] = -1;
    const int s = flip[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) tab(i, j) = s < 0 ? T(-a(i, j)) : a(i, j);
    tab(i, n + i) = T(1);
    tab(i, width - 1) = s < 0 ? T(-b(i)) : b(i);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    T acc(0);
    for (Eigen::Index i = 0; i < m; ++i) acc -= tab(i, j);
    tab(m, j) = acc;
  }
  {
    T acc(0);
    for (Eigen::Index i = 0; i < m; ++i) acc -= tab(i, width - 1);
    tab(m, width - 1) = acc;
  }

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  // Columns whose every positive entry is below the pivot tolerance are
  // skipped until the next pivot (float only).
  std::vector<char> blocked(static_cast<std::size_t>(n + m), 0);
  const int max_iter = 50 * static_cast<int>(width) + 1000;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::Index enter = -1;
    if constexpr (is_exact_v<T>) {
      for (Eigen::Index j = 0; j < n + m; ++j)
        if (detail::lp_negative(tab(m, j), t)) {
          enter = j;
          break;
        }
    } else {
      // Dantzig pricing is far better conditioned in floating point; the
      // iteration cap guards against cycling.
      double most = -t;
      for (Eigen::Index j = 0; j < n + m; ++j)
        if (tab(m, j) < most && !blocked[static_cast<std::size_t>(j)]) {
          most = tab(m, j);
          enter = j;
        }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    T best_ratio(0);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!detail::lp_positive(tab(i, enter), pivot_tol)) continue;
      T ratio = tab(i, width - 1) / tab(i, enter);
      bool better = leave < 0 || ratio < best_ratio;
      if (!better && !(best_ratio < ratio)) {
        if constexpr (is_exact_v<T>)
          better = basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)];
        else
          better = tab(i, enter) > tab(leave, enter);
      }
      if (better) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave < 0) {
      // Phase 1 is bounded, so this only happens through roundoff.
      if constexpr (is_exact_v<T>) {
        break;
      } else {
        blocked[static_cast<std::size_t>(enter)] = 1;
        continue;
      }
    }
    std::fill(blocked.begin(), blocked.end(), 0);

    const T piv = tab(leave, enter);
    tab.row(leave) /= piv;
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave || sign_of(tab(i, enter)) == 0) continue;
      const T f = tab(i, enter);
      tab.row(i) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  FeasibilityResult<T> out;
  out.infeasibility = -tab(m, width - 1);
  const double feas_tol = is_exact_v<T> ? 0.0 : tol * 10;
  out.feasible = sign_of(out.infeasibility, feas_tol) <= 0;
  out.x = Vector<T>::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index v = basis[static_cast<std::size_t>(i)];
    if (v < n) out.x(v) = tab(i, width - 1);
  }
  if (!out.feasible) {
    // Simplex multipliers y_i = 1 - reduced cost of artificial i.
    out.farkas = Vector<T>(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T y = T(1) - tab(m, n + i);
      out.farkas(i) = flip[static_cast<std::size_t>(i)] < 0 ? y : T(-y);
    }
  }
  return out;
}

}  // namespace shadowlab

