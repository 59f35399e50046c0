#pragma once

// Thick-shadow decision procedure, witnesses, sampled coverage and the
// total-disconnectedness certificate.

#include <bit>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shadowlab/ifs.hpp"

namespace shadowlab {

template <class T>
struct FailingSplit {
  std::vector<std::size_t> subset;  // component indices in I (always holds 0)
  Hyperplane<T> separator;          // I side below the offset
};

template <class T>
struct ShadowReport {
  bool thick = false;
  ComponentDecomposition<T> components;  // level 1
  std::size_t tested_splits = 0;
  std::optional<FailingSplit<T>> failing_split;
  std::string arithmetic;
  std::size_t marginal_tests = 0;  // unresolved float verdicts
  std::size_t escalated_tests = 0;
};

struct CoverageReport {
  int level = 0;
  Matrixd directions;  // unit vectors, one per column
  std::vector<double> gaps;
  double max_gap = 0.0;
};

struct DisconnectReport {
  std::vector<int> levels;
  std::vector<double> max_diameters;
  std::vector<std::size_t> component_counts;
  bool certified = false;
  std::optional<double> rho;
};

struct VertexReport {
  Matrixd vertices;
  std::vector<bool> present;
  std::vector<double> min_distance;
  double radius = 0.0;
  double tolerance = 0.0;
};

/// Subsets of {0..r-1} holding 0, minus the full set, in lexicographic order
/// of their sorted member lists.  Bit i marks component i.
std::vector<std::uint32_t> canonical_splits(std::size_t r);

template <class T>
std::string arithmetic_label(const CheckOptions& opt, std::size_t escalated) {
  if constexpr (!is_exact_v<T>) {
    return "float";
  } else {
    if (opt.exact) return ScalarTraits<T>::name;
    return escalated > 0 ? std::string("float+") + ScalarTraits<T>::name : std::string("float");
  }
}

namespace detail {

template <class T>
ConvexPointSet<T> union_body(const std::vector<ConvexPointSet<T>>& parts, std::uint32_t mask, bool inside) {
  Eigen::Index cols = 0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (((mask >> i) & 1u) == static_cast<unsigned>(inside)) cols += parts[i].size();
  Matrix<T> all(parts.front().dim(), cols);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (((mask >> i) & 1u) == static_cast<unsigned>(inside)) {
      all.middleCols(at, parts[i].size()) = parts[i].points;
      at += parts[i].size();
    }
  return ConvexPointSet<T>(reduce_generators(all));
}

template <class T>
ConvexPointSet<T> stacked(const std::vector<ConvexPointSet<T>>& bodies) {
  Eigen::Index cols = 0;
  for (const auto& b : bodies) cols += b.size();
  Matrix<T> all(bodies.front().dim(), cols);
  Eigen::Index at = 0;
  for (const auto& b : bodies) {
    all.middleCols(at, b.size()) = b.points;
    at += b.size();
  }
  return ConvexPointSet<T>(std::move(all));
}

}  // namespace detail

/// conv(seed) = conv(K) iff every seed generator lies in the hull of the
/// level-1 images.  Throws SeedNotTight otherwise.
template <class T>
void require_tight_seed(const IFS<T>& ifs, const CheckOptions& opt) {
  const auto level1 = detail::stacked(iterate_bodies(ifs, 1, opt.body_budget));
  const ConvexPointSet<T> hull(reduce_generators(level1.points));
  for (Eigen::Index j = 0; j < ifs.seed.size(); ++j) {
    Matrix<T> single(ifs.dim, 1);
    single.col(0) = ifs.seed.points.col(j);
    if (!test_hulls(hull, ConvexPointSet<T>(single), opt).intersect)
      throw Error(ErrorKind::SeedNotTight, "seed is larger than the hull of the attractor");
  }
}

/// Every proper split of the level-1 components must have intersecting
/// hulls.  The first failing split in canonical order is reported.
template <class T>
ShadowReport<T> thick_shadow_check(const IFS<T>& ifs, const CheckOptions& opt = {}) {
  require_tight_seed(ifs, opt);
  ShadowReport<T> rep;
  rep.components = component_decomposition(iterate_bodies(ifs, 1, opt.body_budget), opt, 1);
  rep.marginal_tests = rep.components.marginal_pairs;
  rep.escalated_tests = rep.components.escalated_pairs;
  const std::size_t r = rep.components.size();
  if (r > opt.component_cap || r > 31)
    throw Error(ErrorKind::TooManyComponents, std::to_string(r) + " level-1 components exceed the cap");

  std::vector<ConvexPointSet<T>> parts;
  for (std::size_t p = 0; p < r; ++p) parts.push_back(rep.components.part_body(p));
  const auto splits = canonical_splits(r);

  const std::size_t batch = 64 * thread_count();
  for (std::size_t start = 0; start < splits.size(); start += batch) {
    const std::size_t end = std::min(splits.size(), start + batch);
    std::vector<IntersectionResult<T>> results(end - start);
    parallel_for(results.size(), [&](std::size_t i) {
      const std::uint32_t mask = splits[start + i];
      results[i] = test_hulls(detail::union_body(parts, mask, true), detail::union_body(parts, mask, false), opt);
    }, 1);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].marginal) ++rep.marginal_tests;
      if (results[i].escalated) ++rep.escalated_tests;
      if (!results[i].intersect) {
        FailingSplit<T> fail;
        for (std::size_t c = 0; c < r; ++c)
          if ((splits[start + i] >> c) & 1u) fail.subset.push_back(c);
        fail.separator = *results[i].separator;
        rep.failing_split = std::move(fail);
        rep.tested_splits = start + i + 1;
        rep.arithmetic = arithmetic_label<T>(opt, rep.escalated_tests);
        return rep;
      }
    }
  }
  rep.thick = true;
  rep.tested_splits = splits.size();
  rep.arithmetic = arithmetic_label<T>(opt, rep.escalated_tests);
  return rep;
}

/// The failing split's hyperplane, re-verified: it misses every level-1
/// image and crosses conv(seed).
template <class T>
Hyperplane<T> line_witness(const IFS<T>& ifs, const ShadowReport<T>& rep) {
  if (!rep.failing_split) throw Error(ErrorKind::InvalidWitness, "no failing split: the system is thick");
  const auto& fail = *rep.failing_split;
  const Hyperplane<T>& h = fail.separator;
  std::vector<bool> in_subset(rep.components.size(), false);
  for (std::size_t c : fail.subset) in_subset[c] = true;

  for (std::size_t p = 0; p < rep.components.size(); ++p)
    for (std::size_t b : rep.components.parts[p]) {
      const auto& body = rep.components.bodies[b];
      const T hi = support(body, h.normal);
      const Vector<T> neg = -h.normal;
      const T lo = -support(body, neg);
      const bool ok = in_subset[p] ? sign_of(T(h.offset - hi)) > 0 : sign_of(T(lo - h.offset)) > 0;
      if (!ok) throw Error(ErrorKind::InvalidWitness, "witness meets a level-1 image");
    }
  const T hi = support(ifs.seed, h.normal);
  const Vector<T> neg = -h.normal;
  const T lo = -support(ifs.seed, neg);
  if (h.offset < lo || hi < h.offset) throw Error(ErrorKind::InvalidWitness, "witness misses the seed");
  return h;
}

// ---------------------------------------------------------------------------
// Coverage

inline constexpr std::uint64_t kDirectionSeed = 0x5EED;

/// d = 2: angles j*pi/n.  d >= 3: normalized Gaussian samples from a fixed
/// seed (Box-Muller on mt19937_64, bit-reproducible).
Matrixd sample_directions(Eigen::Index dim, std::size_t n);

inline Vectord direction_at_angle(double theta) {
  Vectord u(2);
  u << std::cos(theta), std::sin(theta);
  return u;
}

/// Uncovered length of the projected level-k bodies inside the projection of
/// the seed, per direction.  Pieces shorter than tau count as covered.
CoverageReport coverage_of_bodies(const std::vector<ConvexPointSet<double>>& bodies,
                                  const ConvexPointSet<double>& seed, const Matrixd& directions, int level,
                                  double tau = kDefaultTolerance);

template <class T>
CoverageReport empirical_coverage(const IFS<T>& ifs, const Matrixd& directions, int k,
                                  const CheckOptions& opt = {}) {
  const IFS<double> f = cast_ifs<double>(ifs);
  return coverage_of_bodies(iterate_bodies(f, k, opt.body_budget), f.seed, directions, k, opt.tau);
}

template <class T>
CoverageReport empirical_coverage(const IFS<T>& ifs, std::size_t n_directions, int k, const CheckOptions& opt = {}) {
  if (n_directions == 0) throw Error(ErrorKind::ParamOutOfRange, "need at least one direction");
  return empirical_coverage(ifs, sample_directions(ifs.dim, n_directions), k, opt);
}

// ---------------------------------------------------------------------------
// Disconnectedness

/// Certified when max component diameters shrink by a uniform ratio
/// rho < 1 between consecutive levels.  Never claims connectedness.
template <class T>
DisconnectReport disconnectedness_check(const IFS<T>& ifs, int max_level, const CheckOptions& opt = {}) {
  if (max_level < 2) throw Error(ErrorKind::ParamOutOfRange, "max_level must be at least 2");
  for (int k = 1; k <= max_level; ++k)
    if (!word_count(ifs.size(), k, opt.body_budget))
      throw Error(ErrorKind::BudgetExceeded, "level " + std::to_string(k) + " exceeds the body budget");
  DisconnectReport rep;
  for (int k = 1; k <= max_level; ++k) {
    const auto cd = component_decomposition(iterate_bodies(ifs, k, opt.body_budget), opt, k);
    rep.levels.push_back(k);
    rep.max_diameters.push_back(cd.max_diameter());
    rep.component_counts.push_back(cd.size());
  }
  double rho = 0.0;
  for (std::size_t i = 1; i < rep.max_diameters.size(); ++i) {
    const double prev = rep.max_diameters[i - 1];
    const double cur = rep.max_diameters[i];
    if (prev == 0.0) {
      if (cur > 0.0) rho = INFINITY;
      continue;
    }
    rho = std::max(rho, cur / prev);
  }
  rep.certified = rho < 1.0;
  if (rep.certified) rep.rho = rho;
  return rep;
}

// ---------------------------------------------------------------------------
// Exposed points

inline constexpr std::size_t kDefaultSampleBudget = 100'000;

/// A vertex v of conv(seed) can only lie in K if some deterministic sample
/// point is within the level-k body diameter of it.  Default tolerance is
/// twice that radius.
template <class T>
VertexReport vertices_in_attractor(const IFS<T>& ifs, std::optional<double> tolerance = std::nullopt,
                                   std::size_t budget = kDefaultSampleBudget) {
  VertexReport rep;
  if (ifs.dim == 2)
    rep.vertices = cast_matrix<double>(hull_vertices_2d(ifs.seed));
  else
    rep.vertices = cast_matrix<double>(unique_points(ifs.seed.points));

  const Matrixd samples = attractor_sample(ifs, budget, SampleMethod::Deterministic);
  const int k = sampling_depth(ifs.size(), budget);
  const IFS<double> f = cast_ifs<double>(ifs);
  const auto bodies = iterate_bodies(f, k, budget);
  for (const auto& b : bodies) rep.radius = std::max(rep.radius, diameter(b));
  rep.tolerance = tolerance.value_or(2.0 * rep.radius);

  for (Eigen::Index v = 0; v < rep.vertices.cols(); ++v) {
    const double dist = (samples.colwise() - rep.vertices.col(v)).colwise().norm().minCoeff();
    rep.min_distance.push_back(dist);
    rep.present.push_back(dist + rep.radius <= rep.tolerance);
  }
  return rep;
}

}  // namespace shadowlab
