#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "shadowlab/constructions.hpp"
#include "shadowlab/dimension.hpp"

using namespace shadowlab;

namespace {

Matrixd m2(double a, double b, double c, double d) {
  Matrixd m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrixd random_contraction(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  Matrixd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = g(rng);
  std::uniform_real_distribution<double> target(0.05, 0.95);
  return m * (target(rng) / operator_norm(m));
}

double similarity_residual(const std::vector<double>& ratios, double s) {
  double acc = -1.0;
  for (double r : ratios) acc += std::pow(r, s);
  return std::abs(acc);
}

}  // namespace

TEST_CASE("singular values of small examples") {
  const auto a = singular_values(m2(0.3, 0, 0, 0.7));
  CHECK(a[0] == doctest::Approx(0.7));
  CHECK(a[1] == doctest::Approx(0.3));
  const double h = std::sqrt(0.5) * 0.4;
  const auto rot = singular_values(m2(h, -h, h, h));
  CHECK(rot[0] == doctest::Approx(0.4));
  CHECK(rot[1] == doctest::Approx(0.4));
  const auto t0 = singular_values(m2(0.2, 0.5, 0, 0.2));
  // T^T T = [[0.04, 0.1], [0.1, 0.29]]: eigenvalues solve x^2 - 0.33x + 0.0016.
  const double disc = std::sqrt(0.33 * 0.33 - 4 * 0.0016);
  CHECK(t0[0] == doctest::Approx(std::sqrt((0.33 + disc) / 2)).epsilon(1e-14));
  CHECK(t0[1] == doctest::Approx(std::sqrt((0.33 - disc) / 2)).epsilon(1e-12));
  CHECK(t0[0] * t0[1] == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("singular value function") {
  const Matrixd d = m2(0.3, 0, 0, 0.7);
  CHECK(singular_value_function(d, 0.0) == 1.0);
  CHECK(singular_value_function(d, 1.0) == doctest::Approx(0.7));
  CHECK(singular_value_function(d, 1.5) == doctest::Approx(0.7 * std::sqrt(0.3)).epsilon(1e-14));
  CHECK(singular_value_function(d, 2.0) == doctest::Approx(0.21));
  CHECK_THROWS_AS(singular_value_function(d, 2.5), Error);
  CHECK_THROWS_AS(singular_value_function(d, -0.1), Error);
}

TEST_CASE("singular value function is submultiplicative") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const Eigen::Index dim = 2 + trial % 3;
    const Matrixd a = random_contraction(rng, dim), b = random_contraction(rng, dim);
    const double s = pick(rng) * static_cast<double>(dim);
    const double lhs = singular_value_function(Matrixd(a * b), s);
    const double rhs = singular_value_function(a, s) * singular_value_function(b, s);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("product of singular values is the absolute determinant") {
  std::mt19937_64 rng(161803);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index dim = 2 + trial % 3;
    const Matrixd m = random_contraction(rng, dim);
    double prod = 1.0;
    for (double a : singular_values(m)) prod *= a;
    const double det = std::abs(m.determinant());
    CHECK(prod == doctest::Approx(det).epsilon(1e-10));
    CHECK(singular_value_function(m, static_cast<double>(dim)) == doctest::Approx(det).epsilon(1e-10));
  }
}

TEST_CASE("similarity dimension") {
  const std::vector<std::vector<double>> cases{
      {1.0 / 3, 1.0 / 3}, std::vector<double>(9, 0.2), {0.5, 0.25}, {0.5, 0.5, 0.5, 0.5}, {0.1, 0.2, 0.3, 0.35}};
  for (const auto& r : cases) CHECK(similarity_residual(r, similarity_dimension(r)) < 1e-12);
  CHECK(similarity_dimension({1.0 / 3, 1.0 / 3}) == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-14));
  CHECK(similarity_dimension(std::vector<double>(9, 0.2)) == doctest::Approx(std::log(9.0) / std::log(5.0)).epsilon(1e-14));
  CHECK(similarity_dimension({0.5, 0.25}) == doctest::Approx(std::log2(2 / (std::sqrt(5.0) - 1))).epsilon(1e-14));
}

TEST_CASE("similarity detection") {
  const auto rs = rotated_square(Rational(35, 100));
  for (const auto& m : rs.ifs.maps) CHECK(is_similarity<QSqrt2>(m.matrix));
  const auto simplex = simplex_ifs(standard_simplex_params(2, Rational(1, 5)));
  CHECK(!is_similarity<Rational>(simplex.maps[0].matrix));
  const auto rep = dimension_report(simplex);
  CHECK(!rep.similarity_dim);
  const auto cc = dimension_report(cross_corner(9, 2).ifs);
  REQUIRE(cc.similarity_dim);
  CHECK(*cc.similarity_dim == doctest::Approx(std::log(25.0) / std::log(9.0)).epsilon(1e-14));
}

TEST_CASE("affinity roots") {
  const Matrixd half = m2(0.5, 0, 0, 0.5);
  CHECK(affinity_root({half}, 1).root == 0.0);
  CHECK(affinity_root({half, half, half, half}, 1).root == doctest::Approx(2.0).epsilon(1e-12));

  const auto simplex = simplex_ifs(standard_simplex_params(2, Rational(1, 5)));
  const double closed = *affinity_bound_closed(simplex);
  double prev = 3.0;
  for (int k = 1; k <= 3; ++k) {
    const auto r = affinity_root(simplex, k);
    CHECK(r.root >= 1.0);
    CHECK(r.root <= prev + 1e-9);
    CHECK(r.root <= closed + 1e-9);
    prev = r.root;
  }
  // Hand evaluation of P_1: at s = 1 it is the sum of the norms.
  double p1 = 0.0;
  for (const auto& m : simplex.maps) p1 += operator_norm(cast_matrix<double>(m.matrix));
  CHECK(p1 > 1.0);

  std::vector<Matrixd> ms;
  for (const auto& m : simplex.maps) ms.push_back(cast_matrix<double>(m.matrix));
  const double s1 = affinity_root(ms, 1).root;
  double sum = 0.0;
  for (const auto& m : ms) sum += singular_value_function(m, s1);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed affinity bound tends to one as lambda shrinks") {
  double prev = 3.0;
  for (long inv : {5L, 10L, 20L, 100L, 1000L, 100000L, 100000000L}) {
    const auto ifs = simplex_ifs(standard_simplex_params(2, Rational(1, inv)));
    const double b = *affinity_bound_closed(ifs);
    CHECK(b <= prev);
    prev = b;
  }
  CHECK(prev < 1.1);  // the excess decays like 1/log(1/lambda)
}

TEST_CASE("box counting") {
  Matrixd seg(2, 10000);
  for (Eigen::Index j = 0; j < seg.cols(); ++j) {
    const double t = (static_cast<double>(j) + 0.5) / seg.cols();
    seg(0, j) = t * 0.8 + 0.1;
    seg(1, j) = t * 0.3 + 0.05;
  }
  const auto line = box_count_dimension(seg, dyadic_scales(3, 8));
  CHECK(line.slope == doctest::Approx(1.0).epsilon(0.05));
  Matrixd pt = Matrixd::Constant(2, 5, 0.3);
  CHECK(box_count_dimension(pt, dyadic_scales(3, 8)).slope == doctest::Approx(0.0));
  CHECK_THROWS_AS(box_count_dimension(pt, dyadic_scales(3, 4)), Error);

  const auto cube = as_fractal_cube(cross_corner(9, 2).ifs);
  REQUIRE(cube);
  CHECK(cube->n == 9);
  CHECK(cube->digits == 25);
  const auto exact = fractal_cube_box_count(*cube, 1, 5);
  CHECK(std::abs(exact.slope - std::log(25.0) / std::log(9.0)) < 1e-12);
  CHECK(exact.counts.back() == 9765625.0);
  CHECK(exact.kind == "exact");
  CHECK(!as_fractal_cube(simplex_ifs(standard_simplex_params(2, Rational(1, 5)))));
}
