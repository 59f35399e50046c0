#pragma once

// Affine iterated function systems: maps, composition, iteration and
// connected components of iterated images.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/pending/disjoint_sets.hpp>

#include "shadowlab/convex.hpp"
#include "shadowlab/parallel.hpp"

namespace shadowlab {

/// phi(x) = matrix * x + translation.  `norm` caches the float operator norm.
template <class T>
struct AffineMap {
  Matrix<T> matrix;
  Vector<T> translation;
  double norm = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
  Vector<T> operator()(const Vector<T>& x) const { return matrix * x + translation; }
  Matrix<T> apply(const Matrix<T>& pts) const {
    Matrix<T> out = matrix * pts;
    out.colwise() += translation;
    return out;
  }
};

template <class T>
bool is_invertible(const Matrix<T>& m) {
  const T det = determinant<T>(m);
  if constexpr (is_exact_v<T>) {
    return sign_of(det) != 0;
  } else {
    const double scale = std::pow(std::max(m.cwiseAbs().maxCoeff(), 1e-300), static_cast<double>(m.rows()));
    return std::abs(det) > 1e-14 * scale;
  }
}

/// Unvalidated map; checks only shapes and invertibility.
template <class T>
AffineMap<T> make_affine_map_unchecked(Matrix<T> matrix, Vector<T> translation) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != translation.size())
    throw Error(ErrorKind::DimensionMismatch, "map matrix must be square and match the translation");
  if (!is_invertible(matrix)) throw Error(ErrorKind::SingularMatrix, "map matrix is singular");
  AffineMap<T> m{std::move(matrix), std::move(translation), 0.0};
  m.norm = operator_norm(cast_matrix<double>(m.matrix));
  return m;
}

/// Validated strict contraction.
template <class T>
AffineMap<T> make_affine_map(Matrix<T> matrix, Vector<T> translation) {
  AffineMap<T> m = make_affine_map_unchecked(std::move(matrix), std::move(translation));
  if (!is_strict_contraction<T>(m.matrix))
    throw Error(ErrorKind::NotContractive, "operator norm " + std::to_string(m.norm) + " is not below 1");
  return m;
}

/// f o g
template <class T>
AffineMap<T> compose_maps(const AffineMap<T>& f, const AffineMap<T>& g) {
  AffineMap<T> out{f.matrix * g.matrix, f.matrix * g.translation + f.translation, 0.0};
  out.norm = operator_norm(cast_matrix<double>(out.matrix));
  return out;
}

template <class T>
Vector<T> fixed_point(const AffineMap<T>& m) {
  Matrix<T> a = -m.matrix;
  for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, i) += T(1);
  auto x = solve_linear<T>(a, m.translation);
  if (!x) throw Error(ErrorKind::SingularMatrix, "I - T is singular");
  return *x;
}

template <class To, class From>
AffineMap<To> cast_map(const AffineMap<From>& m) {
  return {cast_matrix<To>(m.matrix), cast_matrix<To>(m.translation), m.norm};
}

struct IfsOptions {
  bool validate_seed = true;
  // Accept maps that are not contractions themselves as long as every
  // composition of some fixed length k <= max_contraction_level is.
  bool allow_eventual = false;
  int max_contraction_level = 8;
  double tau = kDefaultTolerance;
};

template <class T>
struct IteratedFunctionSystem {
  Eigen::Index dim = 0;
  std::vector<AffineMap<T>> maps;
  ConvexPointSet<T> seed;
  int contraction_level = 1;  // smallest k with all level-k maps contractive

  std::size_t size() const { return maps.size(); }
};

template <class T>
using IFS = IteratedFunctionSystem<T>;

using Word = std::vector<std::size_t>;

/// phi_{w1} o ... o phi_{wk}
template <class T>
AffineMap<T> compose(const IFS<T>& ifs, const Word& word) {
  if (word.empty()) throw Error(ErrorKind::LetterOutOfRange, "empty word");
  for (std::size_t letter : word)
    if (letter >= ifs.size()) throw Error(ErrorKind::LetterOutOfRange, "letter " + std::to_string(letter) + " out of range");
  AffineMap<T> out = ifs.maps[word.front()];
  for (std::size_t i = 1; i < word.size(); ++i) out = compose_maps(out, ifs.maps[word[i]]);
  return out;
}

inline constexpr std::size_t kDefaultBodyBudget = 1'000'000;

/// N^k, or nullopt once it exceeds `cap`.
inline std::optional<std::size_t> word_count(std::size_t n, int k, std::size_t cap) {
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) {
    if (n != 0 && total > cap / n) return std::nullopt;
    total *= n;
  }
  if (total > cap) return std::nullopt;
  return total;
}

/// All phi_sigma for sigma in Sigma^k, words in lexicographic order.
template <class T>
std::vector<AffineMap<T>> level_maps(const IFS<T>& ifs, int k, std::size_t budget = kDefaultBodyBudget) {
  if (k < 0) throw Error(ErrorKind::ParamOutOfRange, "negative level");
  if (!word_count(ifs.size(), k, budget))
    throw Error(ErrorKind::BudgetExceeded, "level " + std::to_string(k) + " exceeds the body budget");
  std::vector<AffineMap<T>> cur;
  {
    AffineMap<T> id{Matrix<T>::Identity(ifs.dim, ifs.dim), Vector<T>::Zero(ifs.dim), 1.0};
    cur.push_back(std::move(id));
  }
  const std::size_t n = ifs.size();
  for (int level = 0; level < k; ++level) {
    std::vector<AffineMap<T>> next(cur.size() * n);
    parallel_for(next.size(), [&](std::size_t idx) { next[idx] = compose_maps(cur[idx / n], ifs.maps[idx % n]); });
    cur = std::move(next);
  }
  return cur;
}

/// {phi_sigma(seed) : sigma in Sigma^k}, lexicographic word order.
template <class T>
std::vector<ConvexPointSet<T>> iterate_bodies(const IFS<T>& ifs, int k, std::size_t budget = kDefaultBodyBudget) {
  if (k == 0) return {ifs.seed};
  const auto maps = level_maps(ifs, k - 1, budget / std::max<std::size_t>(ifs.size(), 1));
  if (!word_count(ifs.size(), k, budget))
    throw Error(ErrorKind::BudgetExceeded, "level " + std::to_string(k) + " exceeds the body budget");
  std::vector<Matrix<T>> first(ifs.size());
  for (std::size_t i = 0; i < ifs.size(); ++i) first[i] = ifs.maps[i].apply(ifs.seed.points);
  const std::size_t n = ifs.size();
  std::vector<ConvexPointSet<T>> out(maps.size() * n);
  parallel_for(out.size(), [&](std::size_t idx) {
    out[idx] = ConvexPointSet<T>(maps[idx / n].apply(first[idx % n]));
  });
  return out;
}

template <class To, class From>
IFS<To> cast_ifs(const IFS<From>& ifs) {
  IFS<To> out;
  out.dim = ifs.dim;
  out.contraction_level = ifs.contraction_level;
  for (const auto& m : ifs.maps) out.maps.push_back(cast_map<To>(m));
  out.seed = cast_body<To>(ifs.seed);
  return out;
}

/// Validates and assembles an IFS.  Each map must be invertible and the
/// system contractive (strictly, or eventually when allowed); with
/// validate_seed every mapped seed generator must lie in conv(seed).
template <class T>
IFS<T> make_ifs(std::vector<AffineMap<T>> maps, ConvexPointSet<T> seed, const IfsOptions& opt = {}) {
  if (maps.empty()) throw Error(ErrorKind::DegenerateInput, "an IFS needs at least one map");
  if (seed.size() == 0) throw Error(ErrorKind::DegenerateInput, "empty seed");
  IFS<T> ifs;
  ifs.dim = seed.dim();
  for (auto& m : maps) {
    if (m.dim() != ifs.dim) throw Error(ErrorKind::DimensionMismatch, "map dimension differs from seed dimension");
    if (!is_invertible(m.matrix)) throw Error(ErrorKind::SingularMatrix, "map matrix is singular");
    m.norm = operator_norm(cast_matrix<double>(m.matrix));
  }
  ifs.maps = std::move(maps);
  ifs.seed = std::move(seed);

  auto all_contractive = [](const std::vector<AffineMap<T>>& ms) {
    return std::all_of(ms.begin(), ms.end(), [](const AffineMap<T>& m) { return is_strict_contraction<T>(m.matrix); });
  };
  if (!all_contractive(ifs.maps)) {
    double worst = 0.0;
    for (const auto& m : ifs.maps) worst = std::max(worst, m.norm);
    bool ok = false;
    if (opt.allow_eventual) {
      for (int k = 2; k <= opt.max_contraction_level && word_count(ifs.size(), k, 200'000); ++k) {
        if (all_contractive(level_maps(ifs, k))) {
          ifs.contraction_level = k;
          ok = true;
          break;
        }
      }
    }
    if (!ok) throw Error(ErrorKind::NotContractive, "operator norm " + std::to_string(worst) + " is not below 1");
  }

  if (opt.validate_seed) {
    for (const auto& m : ifs.maps) {
      const Matrix<T> img = m.apply(ifs.seed.points);
      for (Eigen::Index j = 0; j < img.cols(); ++j)
        if (!contains_point(ifs.seed, Vector<T>(img.col(j)), opt.tau))
          throw Error(ErrorKind::SeedNotInvariant, "a mapped seed generator leaves conv(seed)");
    }
  }
  return ifs;
}

// ---------------------------------------------------------------------------
// Sampling

enum class SampleMethod { Deterministic, Chaos };

/// Largest k with N^k <= budget.  A single map samples one point at every
/// depth, so its depth is fixed at 200 (the image diameter is then zero in
/// double precision).
inline int sampling_depth(std::size_t n, std::size_t budget) {
  if (n <= 1) return 200;
  int k = 0;
  while (word_count(n, k + 1, budget)) ++k;
  return k;
}

inline constexpr std::uint64_t kDefaultChaosSeed = 0x5EED;

/// Points near the attractor, in double precision.  Deterministic: phi_sigma(p0)
/// over Sigma^k with k = floor(log_N budget), p0 the fixed point of map 0.
/// Chaos: random orbit after a 100-step burn-in.
template <class T>
Matrixd attractor_sample(const IFS<T>& ifs, std::size_t budget, SampleMethod method,
                         std::uint64_t seed = kDefaultChaosSeed) {
  if (budget == 0) throw Error(ErrorKind::ParamOutOfRange, "sample budget must be positive");
  const IFS<double> f = cast_ifs<double>(ifs);
  const Vectord p0 = cast_matrix<double>(fixed_point(ifs.maps[0]));
  const std::size_t n = f.size();
  const Eigen::Index d = f.dim;

  if (method == SampleMethod::Deterministic) {
    const int k = n > 1 ? sampling_depth(n, budget) : 0;
    Matrixd pts(d, 1);
    pts.col(0) = p0;
    for (int level = 0; level < k; ++level) {
      Matrixd next(d, pts.cols() * static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i)
        next.middleCols(static_cast<Eigen::Index>(i) * pts.cols(), pts.cols()) = f.maps[i].apply(pts);
      pts = std::move(next);
    }
    return pts;
  }

  std::mt19937_64 rng(seed);
  Vectord x = p0;
  for (int i = 0; i < 100; ++i) x = f.maps[rng() % n](x);
  Matrixd pts(d, static_cast<Eigen::Index>(budget));
  for (std::size_t i = 0; i < budget; ++i) {
    x = f.maps[rng() % n](x);
    pts.col(static_cast<Eigen::Index>(i)) = x;
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Pairwise hull tests with optional exact fallback

struct CheckOptions {
  bool exact = false;          // decide every hull test exactly
  bool exact_fallback = true;  // re-run marginal float tests exactly
  double tau = kDefaultTolerance;
  std::size_t body_budget = kDefaultBodyBudget;
  std::size_t component_cap = 20;
};

/// Float test (unless opt.exact), escalated to the exact scalar when
/// marginal and fallback is on.  Double inputs can only be flagged.
template <class T>
IntersectionResult<T> test_hulls(const ConvexPointSet<T>& a, const ConvexPointSet<T>& b, const CheckOptions& opt) {
  if constexpr (!is_exact_v<T>) {
    return hulls_intersect(a, b, opt.tau);
  } else {
    if (opt.exact) return hulls_intersect(a, b);
    const auto approx = hulls_intersect(cast_body<double>(a), cast_body<double>(b), opt.tau);
    if (approx.marginal && opt.exact_fallback) {
      auto exact = hulls_intersect(a, b);
      exact.escalated = true;
      return exact;
    }
    IntersectionResult<T> out;
    out.intersect = approx.intersect;
    out.marginal = approx.marginal;
    if (approx.point) out.point = cast_matrix<T>(*approx.point);
    if (approx.separator) out.separator = cast_hyperplane<T>(*approx.separator);
    return out;
  }
}

// ---------------------------------------------------------------------------
// Components

template <class T>
struct ComponentDecomposition {
  int level = 0;
  std::vector<ConvexPointSet<T>> bodies;
  std::vector<std::vector<std::size_t>> parts;  // ordered by smallest member
  std::vector<T> squared_diameters;             // per part
  std::size_t marginal_pairs = 0;               // unresolved float verdicts
  std::size_t escalated_pairs = 0;

  std::size_t size() const { return parts.size(); }
  double max_diameter() const {
    double best = 0.0;
    for (const auto& d : squared_diameters) best = std::max(best, std::sqrt(to_double(d)));
    return best;
  }
  ConvexPointSet<T> part_body(std::size_t p) const {
    std::vector<Matrix<T>> pieces;
    Eigen::Index cols = 0;
    for (std::size_t b : parts[p]) {
      pieces.push_back(reduce_generators(bodies[b].points));
      cols += pieces.back().cols();
    }
    Matrix<T> all(bodies.front().dim(), cols);
    Eigen::Index at = 0;
    for (const auto& m : pieces) {
      all.middleCols(at, m.cols()) = m;
      at += m.cols();
    }
    return ConvexPointSet<T>(reduce_generators(all));
  }
};

namespace detail {

struct Box {
  Vectord lo;
  Vectord hi;
};

template <class T>
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(const std::vector<ConvexPointSet<T>>& bodies, double pad) {
  std::vector<Box> boxes(bodies.size());
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const Matrixd p = cast_matrix<double>(bodies[i].points);
    boxes[i].lo = p.rowwise().minCoeff().array() - pad;
    boxes[i].hi = p.rowwise().maxCoeff().array() + pad;
  }
  std::vector<std::size_t> order(bodies.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].lo(0) < boxes[b].lo(0) || (boxes[a].lo(0) == boxes[b].lo(0) && a < b);
  });
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < order.size(); ++x) {
    const Box& bx = boxes[order[x]];
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      const Box& by = boxes[order[y]];
      if (by.lo(0) > bx.hi(0)) break;
      bool overlap = true;
      for (Eigen::Index c = 1; c < bx.lo.size() && overlap; ++c)
        overlap = by.lo(c) <= bx.hi(c) && bx.lo(c) <= by.hi(c);
      if (overlap) out.emplace_back(std::min(order[x], order[y]), std::max(order[x], order[y]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Connected components of the union of closed bodies: two bodies share a
/// part iff chained by pairwise hull intersections (touching included).
template <class T>
ComponentDecomposition<T> component_decomposition(std::vector<ConvexPointSet<T>> bodies, const CheckOptions& opt = {},
                                                  int level = 0) {
  if (bodies.empty()) throw Error(ErrorKind::DegenerateInput, "no bodies");
  for (const auto& b : bodies) detail::require_same_dim(b.dim(), bodies.front().dim());

  const auto pairs = detail::candidate_pairs(bodies, 1e-9 + opt.tau);
  std::vector<IntersectionResult<T>> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    results[i] = test_hulls(bodies[pairs[i].first], bodies[pairs[i].second], opt);
  }, 4);

  ComponentDecomposition<T> out;
  out.level = level;
  const std::size_t n = bodies.size();
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
  for (std::size_t i = 0; i < n; ++i) sets.make_set(i);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (results[i].marginal) ++out.marginal_pairs;
    if (results[i].escalated) ++out.escalated_pairs;
    if (results[i].intersect) sets.union_set(pairs[i].first, pairs[i].second);
  }
  std::vector<std::size_t> part_of_root(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find_set(i);
    if (part_of_root[root] == SIZE_MAX) {
      part_of_root[root] = out.parts.size();
      out.parts.emplace_back();
    }
    out.parts[part_of_root[root]].push_back(i);
  }
  out.bodies = std::move(bodies);
  out.squared_diameters.resize(out.parts.size());
  parallel_for(out.parts.size(), [&](std::size_t p) { out.squared_diameters[p] = squared_diameter(out.part_body(p)); }, 1);
  return out;
}

}  // namespace shadowlab
