#include "shadowlab/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shadowlab {

std::vector<std::uint32_t> canonical_splits(std::size_t r) {
  std::vector<std::uint32_t> out;
  if (r < 2) return out;
  const std::uint32_t full = (r >= 32) ? 0xFFFFFFFFu : ((1u << r) - 1u);
  out.reserve((std::size_t{1} << (r - 1)) - 1);
  // Preorder walk: a set is followed by its extensions by larger indices.
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{1u, 1}};
  while (!stack.empty()) {
    auto [mask, next] = stack.back();
    stack.pop_back();
    if (mask != full) out.push_back(mask);
    for (std::size_t c = r; c-- > next;) stack.emplace_back(mask | (1u << c), c + 1);
  }
  return out;
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Matrixd sample_directions(Eigen::Index dim, std::size_t n) {
  Matrixd out(dim, static_cast<Eigen::Index>(n));
  if (dim == 1) {
    out.setOnes();
    return out;
  }
  if (dim == 2) {
    for (std::size_t j = 0; j < n; ++j)
      out.col(static_cast<Eigen::Index>(j)) = direction_at_angle(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    return out;
  }
  std::mt19937_64 rng(kDirectionSeed);
  for (std::size_t j = 0; j < n; ++j) {
    Vectord g(dim);
    do {
      for (Eigen::Index i = 0; i < dim; i += 2) {
        const double u1 = unit_uniform(rng);
        const double u2 = unit_uniform(rng);
        const double rad = std::sqrt(-2.0 * std::log1p(-u1));
        g(i) = rad * std::cos(2.0 * std::numbers::pi * u2);
        if (i + 1 < dim) g(i + 1) = rad * std::sin(2.0 * std::numbers::pi * u2);
      }
    } while (g.norm() == 0.0);
    out.col(static_cast<Eigen::Index>(j)) = g / g.norm();
  }
  return out;
}

CoverageReport coverage_of_bodies(const std::vector<ConvexPointSet<double>>& bodies,
                                  const ConvexPointSet<double>& seed, const Matrixd& directions, int level,
                                  double tau) {
  if (directions.cols() == 0) throw Error(ErrorKind::ParamOutOfRange, "need at least one direction");
  CoverageReport rep;
  rep.level = level;
  rep.directions = directions;
  rep.gaps.assign(static_cast<std::size_t>(directions.cols()), 0.0);

  parallel_for(rep.gaps.size(), [&](std::size_t j) {
    const Vectord u = directions.col(static_cast<Eigen::Index>(j)).normalized();
    const auto whole = projection_interval(seed, u);
    std::vector<std::pair<double, double>> iv(bodies.size());
    for (std::size_t b = 0; b < bodies.size(); ++b) {
      const Eigen::RowVectorXd proj = u.transpose() * bodies[b].points;
      iv[b] = {proj.minCoeff(), proj.maxCoeff()};
    }
    std::sort(iv.begin(), iv.end());
    double gap = 0.0;
    double reach = whole.lo;
    for (const auto& [lo, hi] : iv) {
      if (lo > reach + tau) gap += std::min(lo, whole.hi) - reach;
      reach = std::max(reach, hi);
      if (reach >= whole.hi) break;
    }
    if (whole.hi > reach + tau) gap += whole.hi - reach;
    rep.gaps[j] = std::max(gap, 0.0);
  }, 4);
  rep.max_gap = *std::max_element(rep.gaps.begin(), rep.gaps.end());
  return rep;
}

}  // namespace shadowlab
