#pragma once

// Convex bodies as finite generator sets.  Hulls are never materialized in
// d > 2; everything reduces to support values and LP feasibility.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "shadowlab/lp.hpp"

namespace shadowlab {

inline constexpr double kDefaultTolerance = 1e-9;

/// conv(points), one generator per column.
template <class T>
struct ConvexPointSet {
  Matrix<T> points;

  ConvexPointSet() = default;
  explicit ConvexPointSet(Matrix<T> p) : points(std::move(p)) {}

  Eigen::Index dim() const { return points.rows(); }
  Eigen::Index size() const { return points.cols(); }
};

/// {x : <normal, x> = offset}
template <class T>
struct Hyperplane {
  Vector<T> normal;
  T offset{0};
};

template <class T>
struct Interval {
  T lo{0};
  T hi{0};
};

template <class T>
struct IntersectionResult {
  bool intersect = false;
  bool marginal = false;   // float verdict too close to call
  bool escalated = false;  // decided exactly after a marginal float verdict
  std::optional<Vector<T>> point;
  std::optional<Hyperplane<T>> separator;
};

template <class To, class From>
ConvexPointSet<To> cast_body(const ConvexPointSet<From>& body) {
  return ConvexPointSet<To>(cast_matrix<To>(body.points));
}

template <class To, class From>
Hyperplane<To> cast_hyperplane(const Hyperplane<From>& h) {
  return {cast_matrix<To>(h.normal), scalar_cast<To>(h.offset)};
}

namespace detail {

inline void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw Error(ErrorKind::DimensionMismatch, "dimension mismatch");
}

template <class T>
T dot(const Vector<T>& u, const auto& p) {
  T acc(0);
  for (Eigen::Index i = 0; i < u.size(); ++i) acc += u(i) * p(i);
  return acc;
}

template <class T>
T cross2(const auto& o, const auto& a, const auto& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

}  // namespace detail

template <class T>
T support(const ConvexPointSet<T>& body, const Vector<T>& u) {
  detail::require_same_dim(body.dim(), u.size());
  if (body.size() == 0) throw Error(ErrorKind::DegenerateInput, "empty body");
  T best = detail::dot<T>(u, body.points.col(0));
  for (Eigen::Index j = 1; j < body.size(); ++j) {
    T v = detail::dot<T>(u, body.points.col(j));
    if (best < v) best = std::move(v);
  }
  return best;
}

/// Float mode normalizes u; exact modes report in <., u> units.
template <class T>
Interval<T> projection_interval(const ConvexPointSet<T>& body, Vector<T> u) {
  bool zero = true;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (sign_of(u(i)) != 0) zero = false;
  if (zero) throw Error(ErrorKind::ZeroDirection, "zero direction vector");
  if constexpr (!is_exact_v<T>) u /= u.norm();
  const Vector<T> neg = -u;
  return {T(-support(body, neg)), support(body, u)};
}

template <class T>
T squared_distance(const auto& p, const auto& q) {
  T acc(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const T d = p(i) - q(i);
    acc += d * d;
  }
  return acc;
}

/// Exact points, duplicates removed, lexicographic order.
template <class T>
Matrix<T> unique_points(const Matrix<T>& pts) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(pts.cols()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      if (pts(r, a) < pts(r, b)) return true;
      if (pts(r, b) < pts(r, a)) return false;
    }
    return false;
  };
  std::sort(idx.begin(), idx.end(), less);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i : idx)
    if (keep.empty() || less(keep.back(), i)) keep.push_back(i);
  Matrix<T> out(pts.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = pts.col(keep[j]);
  return out;
}

/// Counterclockwise hull vertices by monotone chain; collinear points dropped.
template <class T>
Matrix<T> hull_vertices_2d(const ConvexPointSet<T>& body) {
  if (body.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "hull_vertices_2d needs dim 2");
  const Matrix<T> p = unique_points(body.points);
  const Eigen::Index n = p.cols();
  if (n <= 2) return p;
  std::vector<Eigen::Index> h(static_cast<std::size_t>(2 * n));
  std::size_t k = 0;
  auto turn = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
    return sign_of(detail::cross2<T>(p.col(o), p.col(a), p.col(b)));
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], i) <= 0) --k;
    h[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    while (k >= lower && turn(h[k - 2], h[k - 1], i) <= 0) --k;
    h[k++] = i;
  }
  --k;
  Matrix<T> out(2, static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) out.col(static_cast<Eigen::Index>(j)) = p.col(h[j]);
  return out;
}

/// Smallest generator set with the same hull: exact hull vertices in the
/// plane, deduplicated points otherwise.
template <class T>
Matrix<T> reduce_generators(const Matrix<T>& pts) {
  if (pts.rows() == 2) return hull_vertices_2d(ConvexPointSet<T>(pts));
  return unique_points(pts);
}

/// Squared diameter; exact in exact modes.
template <class T>
T squared_diameter(const ConvexPointSet<T>& body) {
  const Matrix<T> p = reduce_generators(body.points);
  T best(0);
  for (Eigen::Index i = 0; i < p.cols(); ++i)
    for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
      T d = squared_distance<T>(p.col(i), p.col(j));
      if (best < d) best = std::move(d);
    }
  return best;
}

template <class T>
double diameter(const ConvexPointSet<T>& body) {
  return std::sqrt(to_double(squared_diameter(body)));
}

namespace detail {

// Closest pair between two disjoint convex polygons (vertex lists), exact.
// Returns the two points realizing the distance.
template <class T>
std::pair<Vector<T>, Vector<T>> closest_pair_2d(const Matrix<T>& a, const Matrix<T>& b) {
  auto closest_on_segment = [](const Vector<T>& p, const Vector<T>& s0, const Vector<T>& s1) {
    const Vector<T> e = s1 - s0;
    const T len2 = e(0) * e(0) + e(1) * e(1);
    if (sign_of(len2) == 0) return s0;
    T t = ((p(0) - s0(0)) * e(0) + (p(1) - s0(1)) * e(1)) / len2;
    if (t < T(0)) t = T(0);
    if (T(1) < t) t = T(1);
    return Vector<T>(s0 + e * t);
  };
  std::optional<T> best;
  std::pair<Vector<T>, Vector<T>> out;
  auto consider = [&](const Matrix<T>& pts, const Matrix<T>& poly, bool swap) {
    const Eigen::Index m = poly.cols();
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      const Vector<T> p = pts.col(i);
      for (Eigen::Index j = 0; j < m; ++j) {
        const Vector<T> s0 = poly.col(j);
        const Vector<T> s1 = poly.col((j + 1) % m);
        Vector<T> q = closest_on_segment(p, s0, s1);
        T d = squared_distance<T>(p, q);
        if (!best || d < *best) {
          best = d;
          out = swap ? std::make_pair(q, p) : std::make_pair(p, q);
        }
      }
    }
  };
  consider(a, b, false);
  consider(b, a, true);
  return out;
}

template <class T>
IntersectionResult<T> hulls_intersect_lp(const Matrix<T>& a, const Matrix<T>& b, double tol) {
  const Eigen::Index d = a.rows();
  const Eigen::Index na = a.cols();
  const Eigen::Index nb = b.cols();
  Matrix<T> lp = Matrix<T>::Zero(d + 2, na + nb);
  lp.topLeftCorner(d, na) = a;
  lp.topRightCorner(d, nb) = -b;
  for (Eigen::Index j = 0; j < na; ++j) lp(d, j) = T(1);
  for (Eigen::Index j = 0; j < nb; ++j) lp(d + 1, na + j) = T(1);
  Vector<T> rhs = Vector<T>::Zero(d + 2);
  rhs(d) = T(1);
  rhs(d + 1) = T(1);

  const auto sol = solve_feasibility<T>(lp, rhs, tol);
  IntersectionResult<T> out;
  out.intersect = sol.feasible;
  if (sol.feasible) {
    Vector<T> x = Vector<T>::Zero(d);
    for (Eigen::Index j = 0; j < na; ++j) x += a.col(j) * sol.x(j);
    out.point = x;
    return out;
  }
  // f = (g, alpha, beta): g.a_i + alpha >= 0, -g.b_j + beta >= 0 and
  // alpha + beta < 0, so n = -g has sup_A <n,.> <= alpha < -beta <= inf_B.
  Vector<T> n = -sol.farkas.head(d);
  if (d == 2) {
    const Matrix<T> ha = hull_vertices_2d(ConvexPointSet<T>(a));
    const Matrix<T> hb = hull_vertices_2d(ConvexPointSet<T>(b));
    auto [p, q] = closest_pair_2d<T>(ha, hb);
    n = q - p;
  }
  const T hi_a = support(ConvexPointSet<T>(a), n);
  const Vector<T> neg = -n;
  const T lo_b = -support(ConvexPointSet<T>(b), neg);
  if constexpr (!is_exact_v<T>) {
    // A float infeasibility claim stands only if its separator has a
    // positive margin; otherwise the LP stalled on roundoff.
    const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    const double norm = n.norm();
    if (!(norm > 0.0) || !((lo_b - hi_a) / norm > 1e-13 * scale)) {
      out.intersect = true;
      Vector<T> x = Vector<T>::Zero(d);
      T total(0);
      for (Eigen::Index j = 0; j < na; ++j) {
        x += a.col(j) * sol.x(j);
        total += sol.x(j);
      }
      out.point = total > 0.0 ? Vector<T>(x / total) : Vector<T>(a.col(0));
      return out;
    }
  }
  out.separator = Hyperplane<T>{n, T((hi_a + lo_b) / T(2))};
  return out;
}

template <class T>
Matrix<T> scale_about_centroid(const Matrix<T>& pts, double delta) {
  const Vector<T> c = pts.rowwise().sum() / T(static_cast<double>(pts.cols()));
  Matrix<T> out = pts;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vector<T> v = pts.col(j) - c;
    const double len = v.norm();
    if (len == 0.0) continue;
    const double f = std::max(0.0, 1.0 + delta / len);
    out.col(j) = c + v * f;
  }
  return out;
}

}  // namespace detail

/// LP feasibility of  sum l_i a_i = sum m_j b_j  over convex weights.
/// Touching counts as intersecting.  Separating witnesses satisfy
/// <n,a> <= c <= <n,b>; in the plane the witness is the maximum-margin line.
/// Float verdicts are flagged marginal when shrinking or growing both hulls
/// by 100 tau changes the answer.
template <class T>
IntersectionResult<T> hulls_intersect(const ConvexPointSet<T>& a, const ConvexPointSet<T>& b,
                                      double tau = kDefaultTolerance) {
  detail::require_same_dim(a.dim(), b.dim());
  if (a.size() == 0 || b.size() == 0) throw Error(ErrorKind::DegenerateInput, "empty body");
  const Matrix<T> ra = reduce_generators(a.points);
  const Matrix<T> rb = reduce_generators(b.points);
  if constexpr (is_exact_v<T>) {
    return detail::hulls_intersect_lp<T>(ra, rb, 0.0);
  } else {
    const double lp_tol = std::min(1e-12, tau);
    auto out = detail::hulls_intersect_lp<T>(ra, rb, lp_tol);
    const double delta = 100 * tau;
    if (out.intersect) {
      const auto shrunk = detail::hulls_intersect_lp<T>(detail::scale_about_centroid(ra, -delta),
                                                       detail::scale_about_centroid(rb, -delta), lp_tol);
      out.marginal = !shrunk.intersect;
    } else {
      const auto grown = detail::hulls_intersect_lp<T>(detail::scale_about_centroid(ra, delta),
                                                      detail::scale_about_centroid(rb, delta), lp_tol);
      out.marginal = grown.intersect;
    }
    return out;
  }
}

/// Membership of a point in conv(body).
template <class T>
bool contains_point(const ConvexPointSet<T>& body, const Vector<T>& p, double tau = kDefaultTolerance) {
  Matrix<T> single(p.size(), 1);
  single.col(0) = p;
  return hulls_intersect(body, ConvexPointSet<T>(single), tau).intersect;
}

/// True iff the hyperplane strictly separates the two generator sets
/// (checked by support values; exact in exact modes).
template <class T>
bool strictly_separates(const Hyperplane<T>& h, const ConvexPointSet<T>& lo_side,
                        const ConvexPointSet<T>& hi_side, double tol = 0.0) {
  const T hi = support(lo_side, h.normal);
  const Vector<T> neg = -h.normal;
  const T lo = -support(hi_side, neg);
  return sign_of(T(h.offset - hi), tol) > 0 && sign_of(T(lo - h.offset), tol) > 0;
}

}  // namespace shadowlab
