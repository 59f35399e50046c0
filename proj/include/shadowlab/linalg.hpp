#pragma once

// Small dense linear algebra over any supported scalar.

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "shadowlab/error.hpp"
#include "shadowlab/scalar.hpp"

namespace shadowlab {

template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Vectord = Vector<double>;
using Matrixd = Matrix<double>;

template <class To, class From, int R, int C>
Eigen::Matrix<To, R, C> cast_matrix(const Eigen::Matrix<From, R, C>& m) {
  Eigen::Matrix<To, R, C> out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = scalar_cast<To>(m(i, j));
  return out;
}

/// Gaussian elimination.  Exact scalars pivot on the first nonzero entry;
/// doubles use partial pivoting.  Returns nullopt for a singular system.
template <class T>
std::optional<Vector<T>> solve_linear(Matrix<T> a, Vector<T> b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    if constexpr (is_exact_v<T>) {
      for (Eigen::Index r = col; r < n; ++r)
        if (sign_of(a(r, col)) != 0) {
          pivot = r;
          break;
        }
    } else {
      double best = 0.0;
      for (Eigen::Index r = col; r < n; ++r)
        if (std::abs(a(r, col)) > best) {
          best = std::abs(a(r, col));
          pivot = r;
        }
      if (best < 1e-300) pivot = -1;
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b(pivot), b(col));
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (sign_of(a(r, col)) == 0) continue;
      const T f = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b(r) -= f * b(col);
    }
  }
  Vector<T> x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    T acc = b(r);
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= a(r, c) * x(c);
    x(r) = acc / a(r, r);
  }
  return x;
}

/// Determinant by elimination (exact for exact scalars).
template <class T>
T determinant(Matrix<T> a) {
  const Eigen::Index n = a.rows();
  T det(1);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = -1;
    if constexpr (is_exact_v<T>) {
      for (Eigen::Index r = col; r < n; ++r)
        if (sign_of(a(r, col)) != 0) {
          pivot = r;
          break;
        }
    } else {
      double best = 0.0;
      for (Eigen::Index r = col; r < n; ++r)
        if (std::abs(a(r, col)) > best) {
          best = std::abs(a(r, col));
          pivot = r;
        }
    }
    if (pivot < 0 || sign_of(a(pivot, col)) == 0) return T(0);
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const T f = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

/// True iff the symmetric matrix is positive definite, decided by the signs
/// of its leading principal minors (exact for exact scalars).
template <class T>
bool is_positive_definite(const Matrix<T>& sym) {
  for (Eigen::Index k = 1; k <= sym.rows(); ++k)
    if (sign_of(determinant<T>(sym.topLeftCorner(k, k))) <= 0) return false;
  return true;
}

/// Largest singular value.  d <= 2 uses the closed-form eigenvalue of T^T T,
/// larger matrices use one-sided Jacobi.
double operator_norm(const Matrixd& m);

/// Singular values in descending order.  d <= 2 closed form; d >= 3 cyclic
/// one-sided Jacobi (implicit Jacobi on T^T T) until every off-diagonal
/// entry of T^T T is below 1e-13 relative to its diagonal.
std::vector<double> singular_values(const Matrixd& m);

/// True iff ||m|| < 1.  Exact scalars decide by positive definiteness of
/// I - m^T m; doubles compare the computed norm.
template <class T>
bool is_strict_contraction(const Matrix<T>& m) {
  if constexpr (is_exact_v<T>) {
    const Matrix<T> gram = m.transpose() * m;
    Matrix<T> shifted = -gram;
    for (Eigen::Index i = 0; i < m.rows(); ++i) shifted(i, i) += T(1);
    return is_positive_definite<T>(shifted);
  } else {
    return operator_norm(m) < 1.0;
  }
}

/// Certified rational upper bound on ||m|| for an exact matrix: a float
/// estimate is inflated until u^2 I - m^T m is verified positive definite.
template <ExactScalar T>
Rational certified_norm_bound(const Matrix<T>& m) {
  const double estimate = operator_norm(cast_matrix<double>(m));
  const Matrix<T> gram = m.transpose() * m;
  double slack = 1e-12;
  for (int attempt = 0; attempt < 200; ++attempt, slack *= 4) {
    const Rational u(estimate * (1.0 + slack) + slack);
    Matrix<T> shifted = -gram;
    for (Eigen::Index i = 0; i < m.rows(); ++i) shifted(i, i) += T(u * u);
    if (is_positive_definite<T>(shifted)) return u;
  }
  throw Error(ErrorKind::Internal, "could not certify an operator norm bound");
}

}  // namespace shadowlab
