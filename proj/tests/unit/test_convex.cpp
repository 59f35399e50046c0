#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shadowlab/convex.hpp"

using namespace shadowlab;

namespace {

Matrix<Rational> pts(std::initializer_list<std::pair<Rational, Rational>> xs) {
  Matrix<Rational> m(2, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index j = 0;
  for (const auto& [x, y] : xs) {
    m(0, j) = x;
    m(1, j) = y;
    ++j;
  }
  return m;
}

Matrix<Rational> unit_square() { return pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Separator contract: <n,a> <= c <= <n,b> with n != 0.
void check_separator(const Hyperplane<Rational>& h, const Matrix<Rational>& a, const Matrix<Rational>& b) {
  CHECK(!h.normal.isZero());
  for (Eigen::Index j = 0; j < a.cols(); ++j) CHECK(h.normal.dot(a.col(j)) <= h.offset);
  for (Eigen::Index j = 0; j < b.cols(); ++j) CHECK(h.normal.dot(b.col(j)) >= h.offset);
}

}  // namespace

TEST_CASE("support and projection interval") {
  const ConvexPointSet<Rational> sq(unit_square());
  Vector<Rational> u(2);
  u << 1, 1;
  CHECK(support(sq, u) == 2);
  const auto iv = projection_interval(sq, u);
  CHECK(iv.lo == 0);
  CHECK(iv.hi == 2);
  CHECK_THROWS_AS(projection_interval(sq, Vector<Rational>(Vector<Rational>::Zero(2))), Error);
}

TEST_CASE("planar hull intersection agrees with the separating-axis oracle") {
  std::mt19937_64 rng(31337);
  int hits = 0, misses = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Eigen::Index na = 1 + trial % 5, nb = 1 + (trial / 5) % 5;
    const Matrix<Rational> a = oracle::grid_points(rng, 2, na, 0, 6, 4);
    const Matrix<Rational> b = oracle::grid_points(rng, 2, nb, 3, 9, 4);
    const bool disjoint = oracle::planar_hulls_disjoint(a, b);
    const auto res = hulls_intersect(ConvexPointSet<Rational>(a), ConvexPointSet<Rational>(b));
    CHECK(res.intersect == !disjoint);
    if (res.intersect) {
      ++hits;
      REQUIRE(res.point);
      CHECK(oracle::planar_contains(a, *res.point));
      CHECK(oracle::planar_contains(b, *res.point));
    } else {
      ++misses;
      REQUIRE(res.separator);
      check_separator(*res.separator, a, b);
    }
  }
  CHECK(hits > 100);
  CHECK(misses > 100);
}

TEST_CASE("intersection is symmetric and independent of point order") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix<Rational> a = oracle::grid_points(rng, 2, 4, 0, 8, 8);
    const Matrix<Rational> b = oracle::grid_points(rng, 2, 3, 4, 12, 8);
    const bool ab = hulls_intersect(ConvexPointSet<Rational>(a), ConvexPointSet<Rational>(b)).intersect;
    const bool ba = hulls_intersect(ConvexPointSet<Rational>(b), ConvexPointSet<Rational>(a)).intersect;
    CHECK(ab == ba);
    a.col(0).swap(a.col(3));
    a.col(1).swap(a.col(2));
    CHECK(hulls_intersect(ConvexPointSet<Rational>(a), ConvexPointSet<Rational>(b)).intersect == ab);
  }
}

TEST_CASE("touching hulls intersect") {
  const Matrix<Rational> a = unit_square();
  Matrix<Rational> corner = a;
  corner.array() += Rational(1);  // shares exactly the point (1,1)
  const auto exact = hulls_intersect(ConvexPointSet<Rational>(a), ConvexPointSet<Rational>(corner));
  CHECK(exact.intersect);
  CHECK(*exact.point == Vector<Rational>::Constant(2, Rational(1)));

  const auto fl = hulls_intersect(ConvexPointSet<double>(cast_matrix<double>(a)),
                                  ConvexPointSet<double>(cast_matrix<double>(corner)));
  CHECK(fl.intersect);
  CHECK(fl.marginal);

  Matrix<Rational> apart = corner;
  apart.array() += Rational(1, 1000);
  const auto gap = hulls_intersect(ConvexPointSet<double>(cast_matrix<double>(a)),
                                   ConvexPointSet<double>(cast_matrix<double>(apart)));
  CHECK(!gap.intersect);
  CHECK(!gap.marginal);
}

TEST_CASE("sqrt2 coordinates decide a near-threshold overlap exactly") {
  // A square of side s turned by pi/4 about (1/2,1/2) has half-diagonal
  // s*sqrt2/2 and reaches the corner square [0,r]^2 iff s*sqrt2/2 >= 1 - 2r.
  // With r = 3/10 the threshold is s = 2*sqrt2/5 = 0.56568542...
  const Rational r(3, 10);
  auto diamond = [&](const Rational& side) {
    const QSqrt2 h = QSqrt2(Rational(0), side / 2);
    const QSqrt2 c(Rational(1, 2));
    Matrix<QSqrt2> d(2, 4);
    d << c + h, c, c - h, c, c, c + h, c, c - h;
    return ConvexPointSet<QSqrt2>(d);
  };
  Matrix<QSqrt2> sq(2, 4);
  sq << 0, QSqrt2(r), QSqrt2(r), 0, 0, 0, QSqrt2(r), QSqrt2(r);
  const ConvexPointSet<QSqrt2> corner(sq);
  CHECK(!hulls_intersect(corner, diamond(Rational(565685, 1000000))).intersect);
  CHECK(hulls_intersect(corner, diamond(Rational(565686, 1000000))).intersect);
}

TEST_CASE("three-dimensional cases") {
  Matrix<Rational> tet(3, 4);
  tet << 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  Matrix<Rational> far = tet;
  far.array() += Rational(1, 2);  // every point now has x+y+z >= 3/2
  CHECK(!hulls_intersect(ConvexPointSet<Rational>(tet), ConvexPointSet<Rational>(far)).intersect);
  Matrix<Rational> near = tet;
  near.array() += Rational(1, 4);  // its corner (1/4,1/4,1/4) is inside
  CHECK(hulls_intersect(ConvexPointSet<Rational>(tet), ConvexPointSet<Rational>(near)).intersect);

  Matrix<Rational> shifted = tet;
  shifted.row(0).array() += Rational(1);
  shifted.row(1).array() += Rational(1, 100);
  const auto sep = hulls_intersect(ConvexPointSet<Rational>(tet), ConvexPointSet<Rational>(shifted));
  CHECK(!sep.intersect);
  check_separator(*sep.separator, tet, shifted);

  Matrix<Rational> seg(3, 2);
  seg << Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4), -1, 2;
  CHECK(hulls_intersect(ConvexPointSet<Rational>(tet), ConvexPointSet<Rational>(seg)).intersect);
  CHECK_THROWS_AS(hulls_intersect(ConvexPointSet<Rational>(tet), ConvexPointSet<Rational>(unit_square())), Error);
}

TEST_CASE("hull vertices match the extreme points") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix<Rational> p = oracle::grid_points(rng, 2, 3 + trial % 8, 0, 5, 1);
    const Matrix<Rational> h = hull_vertices_2d(ConvexPointSet<Rational>(p));
    Eigen::Index extreme = 0;
    for (Eigen::Index v = 0; v < p.cols(); ++v) extreme += oracle::is_extreme(p, v);
    CHECK(h.cols() == extreme);
    if (h.cols() >= 3) {
      // Counterclockwise, strictly convex.
      for (Eigen::Index j = 0; j < h.cols(); ++j) {
        const auto o = h.col(j), a = h.col((j + 1) % h.cols()), b = h.col((j + 2) % h.cols());
        CHECK((a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0)) > 0);
      }
    }
  }
}

TEST_CASE("squared diameter is the largest pairwise squared distance") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix<Rational> p = oracle::grid_points(rng, 3, 6, -5, 5, 3);
    Rational best = 0;
    for (Eigen::Index i = 0; i < p.cols(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j) best = std::max(best, Rational((p.col(i) - p.col(j)).squaredNorm()));
    CHECK(squared_diameter(ConvexPointSet<Rational>(p)) == best);
  }
}

TEST_CASE("strict separation is checked by support values") {
  Hyperplane<Rational> h{Vector<Rational>::Unit(2, 0), Rational(3, 2)};
  Matrix<Rational> right = unit_square();
  right.row(0).array() += Rational(2);
  CHECK(strictly_separates(h, ConvexPointSet<Rational>(unit_square()), ConvexPointSet<Rational>(right)));
  h.offset = 1;
  CHECK(!strictly_separates(h, ConvexPointSet<Rational>(unit_square()), ConvexPointSet<Rational>(right)));
}
