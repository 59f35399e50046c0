#include "shadowlab/dimension.hpp"

#include <algorithm>
#include <cmath>

namespace shadowlab {

double singular_value_function(const std::vector<double>& alphas, double s) {
  const double d = static_cast<double>(alphas.size());
  if (!(s >= 0.0 && s <= d)) throw Error(ErrorKind::ParamOutOfRange, "s must lie in [0, d]");
  if (s == 0.0) return 1.0;
  const auto r = static_cast<std::size_t>(std::ceil(s));
  double out = 1.0;
  for (std::size_t i = 0; i + 1 < r; ++i) out *= alphas[i];
  return out * std::pow(alphas[r - 1], s - static_cast<double>(r) + 1.0);
}

double singular_value_function(const Matrixd& m, double s) { return singular_value_function(singular_values(m), s); }

double similarity_dimension(const std::vector<double>& ratios) {
  if (ratios.empty()) throw Error(ErrorKind::ParamOutOfRange, "need at least one ratio");
  for (double r : ratios)
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::ParamOutOfRange, "ratios must lie in (0,1)");
  auto f = [&](double s) {
    double acc = 0.0;
    for (double r : ratios) acc += std::pow(r, s);
    return acc - 1.0;
  };
  if (f(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (f(hi) > 0.0) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

std::optional<double> affinity_bound_closed(const std::vector<Matrixd>& matrices) {
  if (matrices.empty()) throw Error(ErrorKind::ParamOutOfRange, "no maps");
  const Eigen::Index d = matrices.front().rows();
  if (d < 2) throw Error(ErrorKind::DimensionMismatch, "the closed bound needs d >= 2");
  double a1 = 0.0, a2 = 0.0;
  for (const auto& m : matrices) {
    const auto sv = singular_values(m);
    a1 = std::max(a1, sv[0]);
    a2 = std::max(a2, sv[1]);
  }
  const double n = static_cast<double>(matrices.size());
  const double value = 1.0 + std::log(n * a1) / std::log(1.0 / a2);
  if (value < 1.0) return std::nullopt;
  if (value > 2.0) return d == 2 ? std::optional<double>(2.0) : std::nullopt;
  return std::min(static_cast<double>(d), value);
}

namespace {

double tree_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  if (hi - lo == 2) return v[lo] + v[lo + 1];
  const std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(v, lo, mid) + tree_sum(v, mid, hi);
}

}  // namespace

AffinityRoot affinity_root(const std::vector<Matrixd>& matrices, int level) {
  if (matrices.empty()) throw Error(ErrorKind::ParamOutOfRange, "no maps");
  const double d = static_cast<double>(matrices.front().rows());
  std::vector<std::vector<double>> alphas(matrices.size());
  parallel_for(matrices.size(), [&](std::size_t i) { alphas[i] = singular_values(matrices[i]); });

  std::vector<double> terms(matrices.size());
  auto pressure = [&](double s) {
    for (std::size_t i = 0; i < alphas.size(); ++i) terms[i] = singular_value_function(alphas[i], s);
    return tree_sum(terms, 0, terms.size());
  };

  AffinityRoot out;
  out.level = level;
  if (pressure(0.0) <= 1.0) return out;
  if (pressure(d) > 1.0) {
    out.root = d;
    out.saturated = true;
    return out;
  }
  double lo = 0.0, hi = d;
  for (int i = 0; i < 100; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (pressure(mid) > 1.0 ? lo : hi) = mid;
  }
  out.root = hi;
  return out;
}

BoxCount fit_box_counts(std::vector<double> scales, std::vector<double> counts, std::string kind) {
  if (scales.size() < 3 || scales.size() != counts.size())
    throw Error(ErrorKind::TooFewScales, "box counting needs at least 3 scales");
  const std::size_t m = scales.size();
  std::vector<double> x(m), y(m);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = -std::log(scales[i]);
    y[i] = std::log(counts[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorKind::TooFewScales, "box counting needs distinct scales");
  BoxCount out;
  out.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (my + out.slope * (x[i] - mx));
    ss += e * e;
  }
  out.residual = std::sqrt(ss / static_cast<double>(m));
  out.scales = std::move(scales);
  out.counts = std::move(counts);
  out.kind = std::move(kind);
  return out;
}

BoxCount box_count_dimension(const Matrixd& points, const std::vector<double>& scales) {
  if (points.cols() == 0) throw Error(ErrorKind::ParamOutOfRange, "no points");
  if (scales.size() < 3) throw Error(ErrorKind::TooFewScales, "box counting needs at least 3 scales");
  std::vector<double> counts;
  for (double eps : scales) {
    if (!(eps > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "scales must be positive");
    std::vector<std::vector<long long>> keys(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      for (Eigen::Index i = 0; i < points.rows(); ++i)
        keys[static_cast<std::size_t>(j)].push_back(static_cast<long long>(std::floor(points(i, j) / eps)));
    std::sort(keys.begin(), keys.end());
    counts.push_back(static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin()));
  }
  return fit_box_counts(scales, std::move(counts), "estimate");
}

std::vector<double> dyadic_scales(int lo, int hi) {
  std::vector<double> out;
  for (int m = lo; m <= hi; ++m) out.push_back(std::ldexp(1.0, -m));
  return out;
}

BoxCount fractal_cube_box_count(const FractalCube& cube, int lo, int hi) {
  std::vector<double> scales, counts;
  for (int m = lo; m <= hi; ++m) {
    scales.push_back(std::pow(static_cast<double>(cube.n), -m));
    counts.push_back(std::pow(static_cast<double>(cube.digits), m));
  }
  return fit_box_counts(std::move(scales), std::move(counts), "exact");
}

}  // namespace shadowlab
