#include "shadowlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace shadowlab {

namespace {

Matrix<Rational> unit_cube(int d) {
  const int corners = 1 << d;
  Matrix<Rational> m(d, corners);
  for (int c = 0; c < corners; ++c)
    for (int i = 0; i < d; ++i) m(i, c) = Rational((c >> i) & 1);
  return m;
}

template <class T>
AffineMap<T> diagonal_map(const T& a, const T& b, const T& c, const T& e) {
  Matrix<T> m = Matrix<T>::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  Vector<T> v(2);
  v << c, e;
  return make_affine_map<T>(std::move(m), std::move(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// Mendivil-Taylor

MendivilTaylor mendivil_taylor(const Rational& t, const Rational& s) {
  const Rational half(1, 2);
  if (!(t > 0 && t < half && s > half && s < 1 && s + t < 1))
    throw Error(ErrorKind::ParamOutOfRange, "need 0 < t < 1/2 < s < 1 and s + t < 1");
  const Rational one(1);
  std::vector<AffineMap<Rational>> maps{
      diagonal_map<Rational>(t, s, 0, 0),
      diagonal_map<Rational>(s, t, 0, one - t),
      diagonal_map<Rational>(s, t, one - s, 0),
      diagonal_map<Rational>(t, s, one - t, one - s),
  };
  MendivilTaylor out;
  out.ifs = make_ifs<Rational>(std::move(maps), ConvexPointSet<Rational>(unit_cube(2)));
  out.predicted_thick = (one - t) * (one - s - t) <= t * (s - t);
  return out;
}

double mendivil_taylor_threshold(double s) { return (1.0 - std::sqrt(2.0 * s - 1.0)) / 2.0; }

// ---------------------------------------------------------------------------
// Rotated square

RotatedSquare rotated_square(const Rational& r) {
  if (!(r > 0 && r < Rational(1, 2))) throw Error(ErrorKind::ParamOutOfRange, "need 0 < r < 1/2");
  const QSqrt2 q(r);
  const QSqrt2 zero(0);
  const QSqrt2 shift(Rational(1) - r);
  std::vector<AffineMap<QSqrt2>> maps{
      diagonal_map<QSqrt2>(q, q, zero, zero),
      diagonal_map<QSqrt2>(q, q, shift, zero),
      diagonal_map<QSqrt2>(q, q, zero, shift),
      diagonal_map<QSqrt2>(q, q, shift, shift),
  };
  // r R_{pi/4}: entries +-r sqrt2/2.
  const QSqrt2 c(Rational(0), r / 2);
  Matrix<QSqrt2> rot(2, 2);
  rot << c, -c, c, c;
  Vector<QSqrt2> tr(2);
  tr << QSqrt2(Rational(1, 2)), QSqrt2(Rational(1, 2), -r / 2);
  maps.push_back(make_affine_map<QSqrt2>(std::move(rot), std::move(tr)));

  RotatedSquare out;
  out.ifs = make_ifs<QSqrt2>(std::move(maps), cast_body<QSqrt2>(ConvexPointSet<Rational>(unit_cube(2))));
  out.predicted_thick = r >= Rational(1, 3);
  // r < 1/(2 + sqrt2/2)  <=>  r (2 + sqrt2/2) < 1
  out.predicted_disconnected = q * QSqrt2(Rational(2), Rational(1, 2)) < QSqrt2(1);
  return out;
}

// ---------------------------------------------------------------------------
// Cross and corner

namespace {

Matrix<Rational> cells_points(const std::vector<std::vector<int>>& cells, int n, int d) {
  const Matrix<Rational> cube = unit_cube(d);
  Matrix<Rational> out(d, static_cast<Eigen::Index>(cells.size()) * cube.cols());
  Eigen::Index at = 0;
  for (const auto& cell : cells)
    for (Eigen::Index c = 0; c < cube.cols(); ++c, ++at)
      for (int i = 0; i < d; ++i) out(i, at) = (Rational(cell[static_cast<std::size_t>(i)]) + cube(i, c)) / n;
  return reduce_generators(out);
}

bool cells_touch(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1) return false;
  return true;
}

std::vector<int> chain_cell(int corner, int j, int n, int d) {
  std::vector<int> cell(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) cell[static_cast<std::size_t>(i)] = ((corner >> i) & 1) ? n - 1 - j : j;
  return cell;
}

int floor_div(int a, int b) { return a / b; }
int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

CrossCorner cross_corner(int n, int d) {
  if (n < 3 || n % 2 == 0) throw Error(ErrorKind::ParamOutOfRange, "n must be odd and at least 3");
  if (d < 2 || d > 6) throw Error(ErrorKind::ParamOutOfRange, "d must be between 2 and 6");
  const int c = (n - 1) / 2;

  std::set<std::vector<int>> cross_set;
  for (int axis = 0; axis < d; ++axis)
    for (int j = 1; j <= n - 2; ++j) {
      std::vector<int> cell(static_cast<std::size_t>(d), c);
      cell[static_cast<std::size_t>(axis)] = j;
      cross_set.insert(cell);
    }
  const std::vector<std::vector<int>> cross(cross_set.begin(), cross_set.end());
  const ConvexPointSet<Rational> cross_hull(cells_points(cross, n, d));
  const int corners = 1 << d;

  CrossCorner out;
  out.n = n;
  out.d = d;
  out.cross_cells = cross.size();
  out.formula_floor = floor_div((n - 1) * (d - 1) + 2, 2 * d);
  out.formula_ceil = ceil_div((n - 1) * (d - 1) + 2, 2 * d);

  int found = 0;
  for (int N = 1; N <= c && found == 0; ++N) {
    std::vector<std::vector<int>> chain;
    for (int j = 0; j < N; ++j) chain.push_back(chain_cell(0, j, n, d));
    const auto hit = hulls_intersect(ConvexPointSet<Rational>(cells_points(chain, n, d)), cross_hull);
    if (!hit.intersect) continue;
    found = N;
    out.contact = *hit.point;
  }
  if (found == 0)
    throw Error(ErrorKind::NoValidCornerCount,
                "no chain length reaches the cross hull for n=" + std::to_string(n) + ", d=" + std::to_string(d));

  std::vector<std::vector<std::vector<int>>> chains(static_cast<std::size_t>(corners));
  for (int k = 0; k < corners; ++k)
    for (int j = 0; j < found; ++j) chains[static_cast<std::size_t>(k)].push_back(chain_cell(k, j, n, d));

  for (int k = 0; k < corners; ++k) {
    const auto& chain = chains[static_cast<std::size_t>(k)];
    for (const auto& cell : chain) {
      for (const auto& x : cross)
        if (cells_touch(cell, x))
          throw Error(ErrorKind::NoValidCornerCount,
                      "corner chain of length " + std::to_string(found) + " touches the cross for n=" + std::to_string(n) +
                          ", d=" + std::to_string(d));
      for (int other = k + 1; other < corners; ++other)
        for (const auto& y : chains[static_cast<std::size_t>(other)])
          if (cells_touch(cell, y))
            throw Error(ErrorKind::NoValidCornerCount, "corner chains touch each other for n=" + std::to_string(n));
    }
    if (!hulls_intersect(ConvexPointSet<Rational>(cells_points(chain, n, d)), cross_hull).intersect)
      throw Error(ErrorKind::Internal, "corner chain hull misses the cross hull");
  }

  std::set<std::vector<int>> digits(cross.begin(), cross.end());
  for (const auto& chain : chains) digits.insert(chain.begin(), chain.end());
  out.digits.assign(digits.begin(), digits.end());
  out.corner_count = found;

  std::vector<AffineMap<Rational>> maps;
  for (const auto& digit : out.digits) {
    Matrix<Rational> m = Matrix<Rational>::Identity(d, d) / Rational(n);
    Vector<Rational> v(d);
    for (int i = 0; i < d; ++i) v(i) = Rational(digit[static_cast<std::size_t>(i)], n);
    maps.push_back(make_affine_map<Rational>(std::move(m), std::move(v)));
  }
  out.ifs = make_ifs<Rational>(std::move(maps), ConvexPointSet<Rational>(unit_cube(d)));
  out.dimension = std::log(static_cast<double>(out.digits.size())) / std::log(static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Simplex IFS

SimplexParams standard_simplex_params(int d, const Rational& lambda) {
  SimplexParams p;
  p.vertices = Matrix<Rational>::Zero(d, d + 1);
  for (int i = 0; i < d; ++i) p.vertices(i, i + 1) = Rational(1);
  p.lambda = lambda;
  p.r = Rational(3, 10);
  p.t = Vector<Rational>::Constant(d, Rational(1, 5));
  return p;
}

namespace {

// Barycentric coordinates of x with respect to the columns of `simplex`.
std::optional<Vector<Rational>> barycentric(const Matrix<Rational>& simplex, const Vector<Rational>& x) {
  const Eigen::Index d = simplex.rows();
  Matrix<Rational> a(d + 1, d + 1);
  a.topRows(d) = simplex;
  a.row(d).setConstant(Rational(1));
  Vector<Rational> rhs(d + 1);
  rhs.head(d) = x;
  rhs(d) = Rational(1);
  return solve_linear<Rational>(a, rhs);
}

}  // namespace

IFS<Rational> simplex_ifs(const SimplexParams& p) {
  const Eigen::Index d = p.vertices.rows();
  if (p.vertices.cols() != d + 1) throw Error(ErrorKind::DimensionMismatch, "simplex needs d+1 vertices");
  if (p.t.size() != d) throw Error(ErrorKind::DimensionMismatch, "inner translation has the wrong length");
  if (!(p.lambda > 0 && p.lambda < 1)) throw Error(ErrorKind::ParamOutOfRange, "lambda must lie in (0,1)");
  if (!(p.r > 0 && p.r < 1)) throw Error(ErrorKind::ParamOutOfRange, "inner ratio must lie in (0,1)");

  const Matrix<Rational> edges = p.vertices.rightCols(d).colwise() - p.vertices.col(0);
  if (sign_of(determinant<Rational>(edges)) == 0) throw Error(ErrorKind::DegenerateSimplex, "simplex vertices are affinely dependent");

  Matrix<Rational> inner = p.r * p.vertices;
  inner.colwise() += p.t;
  for (Eigen::Index i = 0; i <= d; ++i) {
    const auto bc = barycentric(p.vertices, inner.col(i));
    if (!bc || (*bc).minCoeff() <= 0)
      throw Error(ErrorKind::ParamOutOfRange, "inner simplex is not strictly inside the simplex");
  }

  const Eigen::Index k = d + 1;
  std::vector<AffineMap<Rational>> maps;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index prev = (i + k - 1) % k;
    const Eigen::Index next = (i + 1) % k;
    Matrix<Rational> v(d, d), w(d, d);
    Eigen::Index col = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j == i) continue;
      v.col(col) = p.vertices.col(j) - p.vertices.col(i);
      if (j == prev)
        w.col(col) = inner.col(next) - p.vertices.col(i);
      else
        w.col(col) = p.lambda * v.col(col);
      ++col;
    }
    // T V = W  <=>  V^T T^T = W^T
    Matrix<Rational> tm(d, d);
    for (Eigen::Index row = 0; row < d; ++row) {
      const auto sol = solve_linear<Rational>(v.transpose(), w.row(row).transpose());
      if (!sol) throw Error(ErrorKind::DegenerateSimplex, "edge basis is singular");
      tm.row(row) = sol->transpose();
    }
    const Vector<Rational> a = p.vertices.col(i);
    Vector<Rational> tr = a - tm * a;
    maps.push_back(make_affine_map_unchecked<Rational>(std::move(tm), std::move(tr)));
  }

  IfsOptions opt;
  opt.allow_eventual = true;
  IFS<Rational> ifs = make_ifs<Rational>(std::move(maps), ConvexPointSet<Rational>(p.vertices), opt);

  const auto bodies = iterate_bodies(ifs, 1);
  for (std::size_t a = 0; a < bodies.size(); ++a)
    for (std::size_t b = a + 1; b < bodies.size(); ++b)
      if (hulls_intersect(bodies[a], bodies[b]).intersect)
        throw Error(ErrorKind::ImagesOverlap, "images " + std::to_string(a) + " and " + std::to_string(b) + " intersect");
  return ifs;
}

// ---------------------------------------------------------------------------
// Triangle grid

int triangle_grid_depth(const Rational& lambda) {
  if (!(lambda > 0 && lambda < 1)) throw Error(ErrorKind::ParamOutOfRange, "lambda must lie in (0,1)");
  int n = 0;
  Rational scaled = lambda;  // 2^n lambda
  while (scaled < 100) {
    scaled *= 2;
    ++n;
  }
  return n;
}

namespace {

// Closed triangles (2 x 3, exact) intersect iff no edge normal of either
// separates them.
bool triangles_intersect(const Matrix<Rational>& p, const Matrix<Rational>& q) {
  auto separated_by_edges = [](const Matrix<Rational>& a, const Matrix<Rational>& b) {
    for (int e = 0; e < 3; ++e) {
      const Vector<Rational> s = a.col(e);
      const Vector<Rational> t = a.col((e + 1) % 3);
      const Rational nx = -(t(1) - s(1));
      const Rational ny = t(0) - s(0);
      auto proj = [&](const auto& x) { return nx * x(0) + ny * x(1); };
      Rational amin = proj(a.col(0)), amax = amin;
      for (int i = 1; i < 3; ++i) {
        const Rational v = proj(a.col(i));
        amin = std::min(amin, v);
        amax = std::max(amax, v);
      }
      Rational bmin = proj(b.col(0)), bmax = bmin;
      for (int i = 1; i < 3; ++i) {
        const Rational v = proj(b.col(i));
        bmin = std::min(bmin, v);
        bmax = std::max(bmax, v);
      }
      if (bmax < amin || amax < bmin) return true;
    }
    return false;
  };
  return !separated_by_edges(p, q) && !separated_by_edges(q, p);
}

}  // namespace

TriangleGrid triangle_grid_ifs(const Matrix<Rational>& triangle, const Rational& lambda, std::optional<int> depth,
                               const Rational& inner_ratio) {
  if (triangle.rows() != 2 || triangle.cols() != 3) throw Error(ErrorKind::DimensionMismatch, "need a 2 x 3 triangle");
  TriangleGrid out;
  out.depth = depth.value_or(triangle_grid_depth(lambda));
  if (out.depth < 1 || out.depth > 12) throw Error(ErrorKind::ParamOutOfRange, "grid depth must lie in [1, 12]");

  SimplexParams sp;
  sp.vertices = triangle;
  sp.lambda = lambda;
  sp.r = inner_ratio;
  const Vector<Rational> centroid = triangle.rowwise().sum() / Rational(3);
  sp.t = (Rational(1) - inner_ratio) * centroid;
  const IFS<Rational> simplex = simplex_ifs(sp);
  std::vector<Matrix<Rational>> images;
  std::vector<std::pair<Vectord, Vectord>> image_boxes;
  for (const auto& m : simplex.maps) {
    images.push_back(m.apply(triangle));
    const Matrixd dm = cast_matrix<double>(images.back());
    image_boxes.emplace_back(dm.rowwise().minCoeff(), dm.rowwise().maxCoeff());
  }

  const long side = 1L << out.depth;
  const Rational h(1, side);
  const Vector<Rational> a = triangle.col(0);
  const Vector<Rational> eb = (triangle.col(1) - a) * h;
  const Vector<Rational> ec = (triangle.col(2) - a) * h;
  auto grid = [&](long i, long j) { return Vector<Rational>(a + eb * Rational(i) + ec * Rational(j)); };

  std::vector<AffineMap<Rational>> maps;
  auto consider = [&](const Matrix<Rational>& cell, bool up, long i, long j) {
    const Matrixd dc = cast_matrix<double>(cell);
    const Vectord lo = dc.rowwise().minCoeff(), hi = dc.rowwise().maxCoeff();
    bool hit = false;
    for (std::size_t k = 0; k < images.size() && !hit; ++k) {
      const auto& [blo, bhi] = image_boxes[k];
      if ((lo.array() > bhi.array() + 1e-12).any() || (blo.array() > hi.array() + 1e-12).any()) continue;
      hit = triangles_intersect(cell, images[k]);
    }
    if (!hit) return;
    if (up) {
      Matrix<Rational> m = Matrix<Rational>::Identity(2, 2) * h;
      Vector<Rational> v = grid(i, j) - h * a;
      maps.push_back(make_affine_map<Rational>(std::move(m), std::move(v)));
    } else {
      Matrix<Rational> m = Matrix<Rational>::Identity(2, 2) * Rational(-h);
      Vector<Rational> v = grid(i + 1, j + 1) + h * a;
      maps.push_back(make_affine_map<Rational>(std::move(m), std::move(v)));
    }
  };
  for (long i = 0; i < side; ++i)
    for (long j = 0; i + j < side; ++j) {
      Matrix<Rational> up(2, 3);
      up.col(0) = grid(i, j);
      up.col(1) = grid(i + 1, j);
      up.col(2) = grid(i, j + 1);
      consider(up, true, i, j);
      if (i + j + 2 <= side) {
        Matrix<Rational> down(2, 3);
        down.col(0) = grid(i + 1, j + 1);
        down.col(1) = grid(i, j + 1);
        down.col(2) = grid(i + 1, j);
        consider(down, false, i, j);
      }
    }

  IfsOptions opt;
  opt.validate_seed = false;  // sub-triangles of the seed by construction
  out.map_count = maps.size();
  out.ifs = make_ifs<Rational>(std::move(maps), ConvexPointSet<Rational>(triangle), opt);
  out.dimension_estimate = std::log(static_cast<double>(out.map_count)) / (out.depth * std::log(2.0));
  return out;
}

// ---------------------------------------------------------------------------
// Polytope union

namespace {

std::vector<Matrix<Rational>> fan_triangles(const Matrix<Rational>& ccw, Eigen::Index apex) {
  std::vector<Matrix<Rational>> out;
  const Eigen::Index m = ccw.cols();
  for (Eigen::Index k = 1; k + 1 < m; ++k) {
    Matrix<Rational> tri(2, 3);
    tri.col(0) = ccw.col(apex);
    tri.col(1) = ccw.col((apex + k) % m);
    tri.col(2) = ccw.col((apex + k + 1) % m);
    out.push_back(tri);
  }
  return out;
}

// Boundary triangles of a 3-polytope: for each facet plane (found by brute
// force over vertex triples) the facet's vertices are fanned in order.
std::vector<Matrix<Rational>> cone_tetrahedra(const Matrix<Rational>& pts, Eigen::Index apex) {
  const Eigen::Index m = pts.cols();
  std::set<std::vector<Eigen::Index>> facets;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      for (Eigen::Index k = j + 1; k < m; ++k) {
        const Vector<Rational> u = pts.col(j) - pts.col(i);
        const Vector<Rational> v = pts.col(k) - pts.col(i);
        Vector<Rational> nrm(3);
        nrm << u(1) * v(2) - u(2) * v(1), u(2) * v(0) - u(0) * v(2), u(0) * v(1) - u(1) * v(0);
        if (nrm.isZero()) continue;
        int pos = 0, neg = 0;
        std::vector<Eigen::Index> on;
        for (Eigen::Index q = 0; q < m; ++q) {
          const int s = sign_of(Rational(nrm.dot(Vector<Rational>(pts.col(q) - pts.col(i)))));
          if (s > 0) ++pos;
          if (s < 0) ++neg;
          if (s == 0) on.push_back(q);
        }
        if (pos > 0 && neg > 0) continue;
        facets.insert(on);
      }
  std::vector<Matrix<Rational>> out;
  for (const auto& f : facets) {
    if (std::find(f.begin(), f.end(), apex) != f.end()) continue;
    // Order the facet's vertices by angle inside the facet plane.
    const Vector<Rational> o = pts.col(f[0]);
    const Vector<Rational> u = pts.col(f[1]) - o;
    Vector<Rational> w = pts.col(f[2]) - o;
    Vector<Rational> nrm(3);
    nrm << u(1) * w(2) - u(2) * w(1), u(2) * w(0) - u(0) * w(2), u(0) * w(1) - u(1) * w(0);
    std::vector<Eigen::Index> order(f.begin() + 1, f.end());
    auto side = [&](Eigen::Index a, Eigen::Index b) {
      const Vector<Rational> x = pts.col(a) - o;
      const Vector<Rational> y = pts.col(b) - o;
      Vector<Rational> c(3);
      c << x(1) * y(2) - x(2) * y(1), x(2) * y(0) - x(0) * y(2), x(0) * y(1) - x(1) * y(0);
      return sign_of(Rational(c.dot(nrm)));
    };
    // All other facet vertices lie on one side of the ray o -> v for
    // the extreme ones, so ordering by this predicate is a fan order.
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return side(a, b) > 0; });
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      Matrix<Rational> tet(3, 4);
      tet.col(0) = pts.col(apex);
      tet.col(1) = o;
      tet.col(2) = pts.col(order[k]);
      tet.col(3) = pts.col(order[k + 1]);
      out.push_back(tet);
    }
  }
  return out;
}

}  // namespace

PolytopeUnion polytope_union(const Matrix<Rational>& vertices, const Rational& lambda) {
  const Eigen::Index d = vertices.rows();
  if (d != 2 && d != 3) throw Error(ErrorKind::UnsupportedDimension, "polytope_union supports d = 2 and d = 3");
  const Matrix<Rational> pts = unique_points(vertices);
  if (pts.cols() < d + 1) throw Error(ErrorKind::DegenerateInput, "too few vertices");

  std::vector<std::vector<Matrix<Rational>>> candidates;
  if (d == 2) {
    const Matrix<Rational> ccw = hull_vertices_2d(ConvexPointSet<Rational>(pts));
    if (ccw.cols() < 3) throw Error(ErrorKind::DegenerateInput, "polygon is degenerate");
    for (Eigen::Index apex = 0; apex < ccw.cols(); ++apex) candidates.push_back(fan_triangles(ccw, apex));
  } else {
    for (Eigen::Index apex = 0; apex < pts.cols(); ++apex) candidates.push_back(cone_tetrahedra(pts, apex));
  }

  const std::vector<Rational> ratios{Rational(3, 10), Rational(1, 5), Rational(1, 10)};
  std::string last_error = "no triangulation";
  for (const auto& simplices : candidates) {
    if (simplices.empty()) continue;
    for (const auto& r : ratios) {
      try {
        PolytopeUnion out;
        for (const auto& s : simplices) {
          SimplexParams sp;
          sp.vertices = s;
          sp.lambda = lambda;
          sp.r = r;
          sp.t = (Rational(1) - r) * Vector<Rational>(s.rowwise().sum() / Rational(static_cast<long>(d + 1)));
          out.members.push_back(simplex_ifs(sp));
        }
        out.simplices = simplices;
        return out;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateSimplex) throw;
        last_error = e.what();
      }
    }
  }
  throw Error(ErrorKind::DegenerateInput, "no triangulation produced valid simplex systems: " + last_error);
}

// ---------------------------------------------------------------------------
// Venetian blind

void check_epsilons(const std::vector<Rational>& eps) {
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] <= 0) throw Error(ErrorKind::NonSummableEpsilons, "epsilons must be positive");
    if (j > 0 && !(eps[j] * 2 < eps[j - 1]))
      throw Error(ErrorKind::NonSummableEpsilons, "need eps_{j+1} < eps_j / 2 so that 2^j eps_j decreases");
  }
}

std::vector<Rational> geometric_epsilons(const Rational& ratio, int n) {
  std::vector<Rational> out;
  Rational e(1);
  for (int j = 0; j < n; ++j) {
    e *= ratio;
    out.push_back(e);
  }
  return out;
}

std::vector<Segment<Rational>> venetian_refine(const std::vector<Segment<Rational>>& level, const Rational& eps) {
  std::vector<Segment<Rational>> out;
  out.reserve(level.size() * 2);
  Vector<Rational> up(2);
  up << Rational(0), eps;
  for (const auto& s : level) {
    const Vector<Rational> mid = (s.a + s.b) / Rational(2);
    out.push_back({s.a, mid + up});
    out.push_back({mid, s.b + up});
  }
  return out;
}

VenetianBlind venetian_blind(const std::vector<Rational>& eps, int n, std::size_t n_directions) {
  if (n < 0 || n > 24) throw Error(ErrorKind::ParamOutOfRange, "need 0 <= n <= 24");
  if (static_cast<std::size_t>(n) > eps.size()) throw Error(ErrorKind::ParamOutOfRange, "fewer epsilons than levels");
  check_epsilons(eps);

  VenetianBlind out;
  Vector<Rational> o(2), e(2);
  o << Rational(0), Rational(0);
  e << Rational(1), Rational(0);
  out.E.push_back({{o, e}});
  for (int j = 1; j <= n; ++j) {
    // Connectors of level j sit at x = r/2^j on top of the highest segment
    // of E_{j-1} crossing that line.
    const auto& prev = out.E.back();
    const long count = 1L << j;
    const long prev_count = static_cast<long>(prev.size());
    for (long r = 1; r <= count; ++r) {
      const Rational x(r, count);
      std::optional<Rational> top;
      const long k = (r * prev_count) / count;
      for (long cand : {k - 1, k}) {
        if (cand < 0 || cand >= prev_count) continue;
        const auto& s = prev[static_cast<std::size_t>(cand)];
        if (x < s.a(0) || s.b(0) < x) continue;
        const Rational y = s.a(1) + (s.b(1) - s.a(1)) * (x - s.a(0)) / (s.b(0) - s.a(0));
        if (!top || *top < y) top = y;
      }
      Vector<Rational> lo(2), hi(2);
      lo << x, *top;
      hi << x, *top + eps[static_cast<std::size_t>(j - 1)];
      out.connectors.push_back({lo, hi});
    }
    out.E.push_back(venetian_refine(prev, eps[static_cast<std::size_t>(j - 1)]));
  }

  Rational pow2(1);
  for (int j = 1; j <= n; ++j) {
    pow2 *= 2;
    out.S += pow2 * eps[static_cast<std::size_t>(j - 1)];
  }
  const auto& blinds = out.E.back();
  out.blind_squared_length = squared_distance<Rational>(blinds.front().a, blinds.front().b);
  out.blinds_congruent = true;
  double sum = 0.0;
  for (const auto& s : blinds) {
    const Rational sq = squared_distance<Rational>(s.a, s.b);
    if (sq != out.blind_squared_length) out.blinds_congruent = false;
    sum += std::sqrt(to_double(sq));
  }
  for (const auto& s : out.connectors) out.connector_length += s.b(1) - s.a(1);
  out.length_sum = sum + to_double(out.connector_length);
  const double S = to_double(out.S);
  out.length_closed = S + std::sqrt(1.0 + S * S);

  const auto bodies = segment_bodies(blinds);
  const auto seed = segment_bodies(out.E.front()).front();
  Matrixd dirs(2, static_cast<Eigen::Index>(n_directions));
  for (std::size_t j = 0; j < n_directions; ++j) {
    const double theta = n_directions == 1 ? 0.0 : (std::numbers::pi / 2) * static_cast<double>(j) / static_cast<double>(n_directions - 1);
    dirs.col(static_cast<Eigen::Index>(j)) << std::sin(theta), std::cos(theta);
  }
  out.coverage = coverage_of_bodies(bodies, seed, dirs, n);

  auto mirrored = bodies;
  for (const auto& b : bodies) {
    Matrixd m = b.points;
    m.row(0) = (1.0 - m.row(0).array()).matrix();
    mirrored.emplace_back(std::move(m));
  }
  out.reflected_coverage = coverage_of_bodies(mirrored, seed, sample_directions(2, n_directions), n);
  return out;
}

// ---------------------------------------------------------------------------
// Polygon blind

namespace {

bool inside_convex(const Matrixd& ccw, const Vectord& p) {
  const Eigen::Index m = ccw.cols();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vectord a = ccw.col(i);
    const Vectord b = ccw.col((i + 1) % m);
    const double cr = (b(0) - a(0)) * (p(1) - a(1)) - (b(1) - a(1)) * (p(0) - a(0));
    if (cr < -1e-12) return false;
  }
  return true;
}

}  // namespace

PolygonBlind polygon_blind(const Matrixd& polygon, const std::vector<Rational>& eps, const PolygonBlindOptions& opt) {
  if (polygon.rows() != 2) throw Error(ErrorKind::DimensionMismatch, "polygon must be planar");
  const Eigen::Index m = polygon.cols();
  if (m < 3) throw Error(ErrorKind::DegenerateInput, "polygon needs at least 3 vertices");
  int orientation = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vectord a = polygon.col(i), b = polygon.col((i + 1) % m), c = polygon.col((i + 2) % m);
    const double cr = (b(0) - a(0)) * (c(1) - b(1)) - (b(1) - a(1)) * (c(0) - b(0));
    if (std::abs(cr) < 1e-14) throw Error(ErrorKind::DegenerateInput, "repeated or collinear vertices");
    const int s = cr > 0 ? 1 : -1;
    if (orientation != 0 && s != orientation) throw Error(ErrorKind::NotConvex, "polygon is not convex");
    orientation = s;
  }
  Matrixd ccw = polygon;
  if (orientation < 0) ccw = polygon.rowwise().reverse();
  {
    // A convex polygon turns once; anything more winds around twice.
    double turning = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vectord e1 = ccw.col((i + 1) % m) - ccw.col(i);
      const Vectord e2 = ccw.col((i + 2) % m) - ccw.col((i + 1) % m);
      turning += std::atan2(e1(0) * e2(1) - e1(1) * e2(0), e1.dot(e2));
    }
    if (turning > 2 * std::numbers::pi + 1e-9) throw Error(ErrorKind::NotConvex, "polygon is not simple");
  }

  const int levels = std::min<int>(opt.blind_levels, static_cast<int>(eps.size()));
  check_epsilons(eps);
  std::vector<Segment<Rational>> unit{{Vector<Rational>::Zero(2), Vector<Rational>::Unit(2, 0)}};
  for (int j = 0; j < levels; ++j) unit = venetian_refine(unit, eps[static_cast<std::size_t>(j)]);
  std::vector<std::pair<Vectord, Vectord>> blind;
  for (const auto& s : unit) blind.emplace_back(cast_matrix<double>(s.a), cast_matrix<double>(s.b));

  PolygonBlind out;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vectord prev = ccw.col((i + m - 1) % m), v = ccw.col(i), next = ccw.col((i + 1) % m);
    const Vectord u = (prev - v).normalized(), w = (next - v).normalized();
    out.angles.push_back(std::acos(std::clamp(u.dot(w), -1.0, 1.0)));
  }

  // Places the blind and its mirror image on [p, q], flattened by halving
  // until every endpoint lies in the polygon.
  auto place = [&](const Vectord& p, const Vectord& q) {
    const Vectord along = q - p;
    Vectord inward(2);
    inward << -along(1), along(0);  // left of p->q is inside for CCW order
    for (double kappa = 1.0; kappa > 1e-12; kappa /= 2) {
      std::vector<Segment<double>> segs;
      bool ok = true;
      for (int mirror = 0; mirror < 2 && ok; ++mirror)
        for (const auto& [a, b] : blind) {
          auto map = [&](const Vectord& x) {
            const double s = mirror ? 1.0 - x(0) : x(0);
            return Vectord(p + along * s + inward * (kappa * x(1)));
          };
          Segment<double> seg{map(a), map(b)};
          if (!inside_convex(ccw, seg.a) || !inside_convex(ccw, seg.b)) {
            ok = false;
            break;
          }
          segs.push_back(std::move(seg));
        }
      if (ok) {
        out.segments.insert(out.segments.end(), segs.begin(), segs.end());
        ++out.blinds;
        return;
      }
    }
    throw Error(ErrorKind::Internal, "could not fit a blind inside the polygon");
  };

  for (Eigen::Index i = 0; i < m; ++i) {
    const Vectord a = ccw.col(i), b = ccw.col((i + 1) % m);
    const Vectord mid = (a + b) / 2;
    // Half-side [mid, a] borders vertex i, [mid, b] borders vertex i+1;
    // both are oriented along the CCW direction for placement.
    for (int half = 0; half < 2; ++half) {
      const Eigen::Index vertex = half == 0 ? i : (i + 1) % m;
      const Vectord p = half == 0 ? a : mid;
      const Vectord q = half == 0 ? mid : b;
      if (out.angles[static_cast<std::size_t>(vertex)] >= std::numbers::pi / 2 - 1e-12) {
        place(p, q);
        continue;
      }
      ++out.cascades;
      const Vectord vtx = ccw.col(vertex);
      const Vectord from = mid;  // parameter 0 at the midpoint, 1 at the vertex
      for (int j = 0; j < opt.depth; ++j) {
        const double s0 = 1.0 - std::ldexp(1.0, -j);
        const double s1 = 1.0 - std::ldexp(1.0, -j - 1);
        Vectord x0 = from + (vtx - from) * s0;
        Vectord x1 = from + (vtx - from) * s1;
        if (half == 0) std::swap(x0, x1);
        place(x0, x1);
      }
      out.points.push_back(vtx);
      out.tail_bound += (vtx - from).norm() * std::ldexp(1.0, -opt.depth);
    }
  }

  auto bodies = segment_bodies(out.segments);
  for (const auto& pnt : out.points) bodies.emplace_back(Matrixd(pnt));
  out.coverage = coverage_of_bodies(bodies, ConvexPointSet<double>(ccw), sample_directions(2, opt.n_directions), 0);
  return out;
}

}  // namespace shadowlab
