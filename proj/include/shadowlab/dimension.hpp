#pragma once

// Similarity dimension, singular value function, affinity-dimension upper
// bounds and box counting.

#include <optional>
#include <string>
#include <vector>

#include "shadowlab/ifs.hpp"

namespace shadowlab {

/// phi^s(T) = a_1 ... a_{r-1} a_r^{s-r+1}, r = ceil(s); phi^0 = 1.
double singular_value_function(const Matrixd& m, double s);
double singular_value_function(const std::vector<double>& alphas, double s);

/// Root of sum r_i^s = 1.
double similarity_dimension(const std::vector<double>& ratios);

/// T^T T = c I.  Exact scalars decide exactly, doubles to a relative 1e-12.
template <class T>
bool is_similarity(const Matrix<T>& m) {
  const Matrix<T> gram = m.transpose() * m;
  const T c = gram(0, 0);
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      const T want = i == j ? c : T(0);
      if constexpr (is_exact_v<T>) {
        if (gram(i, j) != want) return false;
      } else {
        if (std::abs(gram(i, j) - want) > 1e-12 * std::max(1.0, std::abs(c))) return false;
      }
    }
  return true;
}

/// 1 + log(N a_1) / log(1/a_2) with a_1, a_2 the largest first and second
/// singular values over the maps.  The estimate holds for 1 <= s <= 2 only:
/// nullopt when the value falls below 1, and above 2 it is replaced by 2 in
/// the plane and dropped otherwise.
std::optional<double> affinity_bound_closed(const std::vector<Matrixd>& matrices);

template <class T>
std::optional<double> affinity_bound_closed(const IFS<T>& ifs) {
  if (ifs.dim < 2) throw Error(ErrorKind::DimensionMismatch, "the closed bound needs d >= 2");
  std::vector<Matrixd> ms;
  for (const auto& m : ifs.maps) ms.push_back(cast_matrix<double>(m.matrix));
  return affinity_bound_closed(ms);
}

struct AffinityRoot {
  int level = 0;
  double root = 0.0;
  bool saturated = false;  // P_k(d) > 1, root clamped to d
};

/// Root of P(s) = sum_j phi^s(m_j) = 1 on [0, d].  The sum uses a fixed
/// pairwise-tree association.
AffinityRoot affinity_root(const std::vector<Matrixd>& matrices, int level);

template <class T>
AffinityRoot affinity_root(const IFS<T>& ifs, int k, std::size_t budget = kDefaultBodyBudget) {
  if (k < 1) throw Error(ErrorKind::ParamOutOfRange, "level must be at least 1");
  const auto maps = level_maps(ifs, k, budget);
  std::vector<Matrixd> ms(maps.size());
  parallel_for(ms.size(), [&](std::size_t i) { ms[i] = cast_matrix<double>(maps[i].matrix); });
  return affinity_root(ms, k);
}

struct BoxCount {
  std::vector<double> scales;
  std::vector<double> counts;
  double slope = 0.0;
  double residual = 0.0;  // RMS deviation of the fit
  std::string kind;       // "estimate" or "exact"
};

/// Least-squares slope of log N(eps) against log(1/eps).
BoxCount fit_box_counts(std::vector<double> scales, std::vector<double> counts, std::string kind);

/// Occupied boxes of the grid of side eps, for each eps.
BoxCount box_count_dimension(const Matrixd& points, const std::vector<double>& scales);

/// 2^-lo .. 2^-hi
std::vector<double> dyadic_scales(int lo, int hi);

struct FractalCube {
  long n = 0;
  std::size_t digits = 0;
};

/// x -> (x + digit)/n with distinct integer digits in [0, n).
template <class T>
std::optional<FractalCube> as_fractal_cube(const IFS<T>& ifs) {
  const T scale = ifs.maps.front().matrix(0, 0);
  if (sign_of(scale) <= 0) return std::nullopt;
  const T inv = T(1) / scale;
  long n = 0;
  if constexpr (is_exact_v<T>) {
    Rational q;
    if constexpr (std::same_as<T, QSqrt2>) {
      if (!inv.is_rational()) return std::nullopt;
      q = inv.rational_part();
    } else {
      q = inv;
    }
    if (denominator(q) != 1 || q < 2 || q > 1000000) return std::nullopt;
    n = numerator(q).template convert_to<long>();
  } else {
    const double r = std::round(inv);
    if (r < 2 || std::abs(inv - r) > 1e-12 * r) return std::nullopt;
    n = static_cast<long>(r);
  }
  std::vector<std::vector<long>> seen;
  for (const auto& m : ifs.maps) {
    Matrix<T> want = Matrix<T>::Identity(ifs.dim, ifs.dim) * scale;
    if (m.matrix != want) return std::nullopt;
    std::vector<long> digit;
    for (Eigen::Index i = 0; i < ifs.dim; ++i) {
      const double v = to_double(T(m.translation(i) * T(n)));
      const double r = std::round(v);
      if (r < 0 || r >= static_cast<double>(n) || std::abs(v - r) > 1e-12) return std::nullopt;
      if (T(static_cast<long>(r)) != T(m.translation(i) * T(n))) return std::nullopt;
      digit.push_back(static_cast<long>(r));
    }
    seen.push_back(std::move(digit));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return std::nullopt;
  return FractalCube{n, seen.size()};
}

/// Exact occupancy |D|^m of the n^-m grid for m = lo..hi.
BoxCount fractal_cube_box_count(const FractalCube& cube, int lo, int hi);

// ---------------------------------------------------------------------------

struct DimensionOptions {
  std::vector<int> levels{1, 2};
  int box_lo = 3;                        // finest exponent range for sampled counting
  int box_hi = 8;
  std::size_t sample_budget = 100'000;
  std::size_t body_budget = kDefaultBodyBudget;
};

struct DimensionReport {
  std::optional<double> similarity_dim;
  std::optional<double> affinity_bound_closed;
  std::vector<AffinityRoot> affinity_roots;
  BoxCount box_count;
  double bracket_lo = 0.0;  // max(1, box slope), capped by bracket_hi
  double bracket_hi = 0.0;  // min over the roots (d when none)
};

template <class T>
DimensionReport dimension_report(const IFS<T>& ifs, const DimensionOptions& opt = {}) {
  DimensionReport rep;
  bool similar = true;
  std::vector<double> ratios;
  for (const auto& m : ifs.maps) {
    if (!is_similarity<T>(m.matrix)) {
      similar = false;
      break;
    }
    ratios.push_back(std::sqrt(to_double(T((m.matrix.transpose() * m.matrix)(0, 0)))));
  }
  if (similar) rep.similarity_dim = similarity_dimension(ratios);
  if (ifs.dim >= 2) rep.affinity_bound_closed = affinity_bound_closed(ifs);
  for (int k : opt.levels) rep.affinity_roots.push_back(affinity_root(ifs, k, opt.body_budget));

  if (const auto cube = as_fractal_cube(ifs)) {
    int hi = 1;
    double cells = static_cast<double>(cube->digits);
    while (hi < 5 && cells * static_cast<double>(cube->digits) < 1e15) {
      ++hi;
      cells *= static_cast<double>(cube->digits);
    }
    rep.box_count = fractal_cube_box_count(*cube, 1, std::max(hi, 3));
  } else {
    rep.box_count = box_count_dimension(attractor_sample(ifs, opt.sample_budget, SampleMethod::Deterministic),
                                        dyadic_scales(opt.box_lo, opt.box_hi));
  }

  rep.bracket_hi = static_cast<double>(ifs.dim);
  for (const auto& r : rep.affinity_roots) rep.bracket_hi = std::min(rep.bracket_hi, r.root);
  rep.bracket_lo = std::min(std::max(1.0, rep.box_count.slope), rep.bracket_hi);
  return rep;
}

}  // namespace shadowlab
