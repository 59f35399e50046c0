#pragma once

// Generators for the explicit families: IFSs (or segment collections) with
// their closed-form predicted verdicts.

#include <optional>
#include <string>
#include <vector>

#include "shadowlab/shadow.hpp"

namespace shadowlab {

template <class T>
struct Segment {
  Vector<T> a;
  Vector<T> b;
};

// ---------------------------------------------------------------------------

struct MendivilTaylor {
  IFS<Rational> ifs;
  bool predicted_thick = false;
};

/// Four corner rectangles: (tx,sy), (sx,ty+1-t), (sx+1-s,ty), (tx+1-t,sy+1-s).
/// Needs 0 < t < 1/2 < s < 1 and s + t < 1.
MendivilTaylor mendivil_taylor(const Rational& t, const Rational& s);

/// (1 - sqrt(2s - 1)) / 2, the smallest thick t for a given s.
double mendivil_taylor_threshold(double s);

// ---------------------------------------------------------------------------

struct RotatedSquare {
  IFS<QSqrt2> ifs;
  bool predicted_thick = false;          // r >= 1/3
  bool predicted_disconnected = false;   // r < 1/(2 + 1/sqrt2)
};

/// Four corner squares of ratio r plus the centre square rotated by pi/4.
RotatedSquare rotated_square(const Rational& r);

// ---------------------------------------------------------------------------

struct CrossCorner {
  IFS<Rational> ifs;
  int n = 0;
  int d = 0;
  std::vector<std::vector<int>> digits;  // sorted, 0-based cell coordinates
  std::size_t cross_cells = 0;
  int corner_count = 0;                  // N found by search
  int formula_floor = 0;                 // floor((n-1)(d-1)/(2d) + 1/d)
  int formula_ceil = 0;                  // ceil(((n-1)(d-1)/2 + 1)/d)
  Vector<Rational> contact;              // a common point of chain and cross hulls
  double dimension = 0.0;                // log|digits| / log n
};

/// Fractal cube on the n^d grid: an axis cross through the centre cell and
/// 2^d diagonal corner chains, each just long enough for its hull to reach
/// the cross hull without any chain cell touching another piece.
CrossCorner cross_corner(int n, int d);

// ---------------------------------------------------------------------------

struct SimplexParams {
  Matrix<Rational> vertices;  // d x (d+1), columns A_0..A_d
  Rational lambda{1, 5};
  Rational r{3, 10};          // inner simplex A'_i = r A_i + t
  Vector<Rational> t;
};

/// Standard simplex {0, e_1, .., e_d} with inner translation (1/5,..,1/5).
SimplexParams standard_simplex_params(int d, const Rational& lambda);

/// Map i fixes A_i, scales the edges A_j - A_i by lambda except the edge to
/// A_{i-1}, which goes to A'_{i+1} - A_i (indices mod d+1).
IFS<Rational> simplex_ifs(const SimplexParams& p);

// ---------------------------------------------------------------------------

struct TriangleGrid {
  IFS<Rational> ifs;
  int depth = 0;
  std::size_t map_count = 0;
  double dimension_estimate = 0.0;  // log m / log 2^n
};

/// Smallest n with 2^-n <= lambda/100 (so also lambda/100 < 2^-n+1).
int triangle_grid_depth(const Rational& lambda);

/// Sub-triangles of the 4^n grid that meet some image of the simplex IFS
/// on `triangle` (2 x 3).  `depth` overrides the bracketing depth.
TriangleGrid triangle_grid_ifs(const Matrix<Rational>& triangle, const Rational& lambda,
                               std::optional<int> depth = std::nullopt, const Rational& inner_ratio = Rational(3, 10));

// ---------------------------------------------------------------------------

struct PolytopeUnion {
  std::vector<IFS<Rational>> members;
  std::vector<Matrix<Rational>> simplices;
};

/// Triangulates conv(vertices) (d = 2 fan, d = 3 cone over boundary
/// triangles) and builds one simplex IFS per simplex.
PolytopeUnion polytope_union(const Matrix<Rational>& vertices, const Rational& lambda);

// ---------------------------------------------------------------------------

struct VenetianBlind {
  std::vector<std::vector<Segment<Rational>>> E;  // E_0 .. E_n
  std::vector<Segment<Rational>> connectors;      // V_n
  Rational S{0};                                  // sum 2^j eps_j
  Rational blind_squared_length{0};               // common to all 2^n blinds
  bool blinds_congruent = false;
  Rational connector_length{0};
  double length_sum = 0.0;                        // sum of computed segment lengths
  double length_closed = 0.0;                     // S + sqrt(1 + S^2)
  CoverageReport coverage;                        // normals over [0, pi/2]
  CoverageReport reflected_coverage;              // with the mirror image, [0, pi)
};

/// Positive and eps_{j+1} < eps_j / 2 on the prefix (so 2^j eps_j strictly
/// decreases); throws NonSummableEpsilons otherwise.
void check_epsilons(const std::vector<Rational>& eps);

std::vector<Rational> geometric_epsilons(const Rational& ratio, int n);

std::vector<Segment<Rational>> venetian_refine(const std::vector<Segment<Rational>>& level, const Rational& eps);

VenetianBlind venetian_blind(const std::vector<Rational>& eps, int n, std::size_t n_directions = 1000);

/// Segments as two-point bodies.
template <class T>
std::vector<ConvexPointSet<double>> segment_bodies(const std::vector<Segment<T>>& segs) {
  std::vector<ConvexPointSet<double>> out;
  out.reserve(segs.size());
  for (const auto& s : segs) {
    Matrixd m(s.a.size(), 2);
    m.col(0) = cast_matrix<double>(s.a);
    m.col(1) = cast_matrix<double>(s.b);
    out.emplace_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct PolygonBlind {
  std::vector<Segment<double>> segments;
  std::vector<Vectord> points;      // acute vertices, kept as single points
  std::size_t blinds = 0;
  std::size_t cascades = 0;         // half-sides at acute vertices
  std::vector<double> angles;       // interior angle per vertex
  double tail_bound = 0.0;
  CoverageReport coverage;
};

struct PolygonBlindOptions {
  int blind_levels = 6;
  int depth = 12;
  std::size_t n_directions = 720;
};

/// Half-sides next to an angle >= pi/2 get one blind and its mirror image;
/// those next to an acute angle get the dyadic cascade of blinds toward the
/// vertex, truncated at `depth`, plus the vertex itself.
PolygonBlind polygon_blind(const Matrixd& polygon, const std::vector<Rational>& eps,
                           const PolygonBlindOptions& opt = {});

}  // namespace shadowlab
