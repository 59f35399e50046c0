// Acceptance run: one PASS/FAIL line per criterion.
//
// Reference values are computed here from closed forms or by independent
// means (exact arithmetic on the defining inequalities, Eigen decompositions,
// direct support queries), never read back from the code under test.
//
// Exit status is nonzero when a check fails that is not listed as known.
// Known failures still print FAIL; pass --strict to make them fatal too.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <json.hpp>

#include "shadowlab/constructions.hpp"
#include "shadowlab/dimension.hpp"

using namespace shadowlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  Criterion(int i, std::string t) : id(i), title(std::move(t)) {}
  int id;
  std::string title;
  std::vector<std::string> failures;
  std::vector<std::string> known_failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  // A check that is implemented as stated but does not hold; it still
  // fails, but does not change the exit status.
  void expect_known(bool ok, const std::string& what) {
    if (!ok) known_failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
  bool passed() const { return failures.empty() && known_failures.empty(); }
};

std::string fmt(double x, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

CheckOptions exact_mode() {
  CheckOptions o;
  o.exact = true;
  return o;
}

template <class T>
Interval<double> interval_of(const ConvexPointSet<T>& body, const Vector<T>& n, T& lo, T& hi) {
  lo = hi = n.dot(body.points.col(0));
  for (Eigen::Index j = 1; j < body.size(); ++j) {
    const T v = n.dot(body.points.col(j));
    if (v < lo) lo = v;
    if (hi < v) hi = v;
  }
  return {to_double(lo), to_double(hi)};
}

// ---------------------------------------------------------------------------

void criterion_1(Criterion& c) {
  // (1-t)(1-s-t) <= t(s-t), evaluated on the rationals directly.
  auto closed = [](const Rational& t, const Rational& s) { return (1 - t) * (1 - s - t) <= t * (s - t); };
  int cells = 0, agree = 0;
  for (int ti = 1; ti <= 49; ++ti)
    for (int si = 51; si <= 99; ++si) {
      if (ti + si >= 100) continue;
      const Rational t(ti, 100), s(si, 100);
      const auto mt = mendivil_taylor(t, s);
      const bool thick = thick_shadow_check(mt.ifs, exact_mode()).thick;
      ++cells;
      if (thick == closed(t, s)) {
        ++agree;
      } else {
        c.expect(false, "disagreement at t=" + std::to_string(ti) + "/100, s=" + std::to_string(si) + "/100");
      }
    }
  c.note(std::to_string(agree) + "/" + std::to_string(cells) + " cells agree");

  const Rational s(7, 10);
  const bool at18 = thick_shadow_check(mendivil_taylor(Rational(18, 100), s).ifs, exact_mode()).thick;
  const bool at19 = thick_shadow_check(mendivil_taylor(Rational(19, 100), s).ifs, exact_mode()).thick;
  c.expect(!at18, "t=18/100, s=7/10 should not be thick");
  c.expect(at19, "t=19/100, s=7/10 should be thick");
  // The flip point (1 - sqrt(2/5))/2 lies strictly between the two.
  const double flip = (1 - std::sqrt(0.4)) / 2;
  c.expect(0.18 < flip && flip < 0.19, "flip point outside (0.18, 0.19)");
  c.note("flip at t=" + fmt(flip, 8) + " between 18/100 and 19/100");
}

void criterion_2(Criterion& c) {
  int agree = 0;
  for (int k = 1; k <= 49; ++k) {
    const auto rs = rotated_square(Rational(k, 100));
    const bool thick = thick_shadow_check(rs.ifs, exact_mode()).thick;
    const bool want = 3 * k >= 100;
    c.expect(thick == want, "verdict wrong at r=" + std::to_string(k) + "/100");
    agree += thick == want;
  }
  c.note(std::to_string(agree) + "/49 verdicts match r >= 1/3");
  c.expect(thick_shadow_check(rotated_square(Rational(1, 3)).ifs, exact_mode()).thick, "r=1/3 should be thick");

  for (int k : {34, 35, 36}) {
    const auto rep = disconnectedness_check(rotated_square(Rational(k, 100)).ifs, 3, exact_mode());
    c.expect(rep.certified, "disconnectedness not certified at r=" + std::to_string(k) + "/100");
  }

  // The rotated centre square first reaches the corner squares when
  // r (2 + 1/sqrt2) = 1, decided here in Q(sqrt2).
  const QSqrt2 factor = QSqrt2(2) + QSqrt2(Rational(0), Rational(1, 2));
  std::vector<std::size_t> counts;
  for (int k : {36, 37, 38}) {
    const Rational r(k, 100);
    const auto rs = rotated_square(r);
    const auto cd = component_decomposition(iterate_bodies(rs.ifs, 1), exact_mode(), 1);
    counts.push_back(cd.size());
    const bool apart = QSqrt2(r) * factor < QSqrt2(1);
    c.expect(cd.size() == (apart ? 5u : 1u), "level-1 component count wrong at r=" + std::to_string(k) + "/100");
  }
  c.expect(counts.front() == 5 && counts.back() == 1, "component count should drop from 5 to 1");
  c.note("components at r=36,37,38/100: " + std::to_string(counts[0]) + "," + std::to_string(counts[1]) + "," +
         std::to_string(counts[2]));
}

void criterion_3(Criterion& c) {
  for (int n : {9, 11}) {
    const auto cc = cross_corner(n, 2);
    c.expect(thick_shadow_check(cc.ifs, exact_mode()).thick, "cross_corner(" + std::to_string(n) + ",2) not thick");
    c.expect(disconnectedness_check(cc.ifs, 3).certified,
             "cross_corner(" + std::to_string(n) + ",2) disconnectedness not certified");
    const auto cube = as_fractal_cube(cc.ifs);
    c.expect(cube.has_value(), "cross_corner not recognised as a fractal cube");
    if (cube) {
      const double slope = fractal_cube_box_count(*cube, 1, 5).slope;
      const double want = std::log(static_cast<double>(cc.digits.size())) / std::log(static_cast<double>(n));
      c.expect(std::abs(slope - want) < 1e-12, "box-count slope off for n=" + std::to_string(n));
      if (n == 9) c.note("n=9 slope " + fmt(slope, 10));
    }
  }
  double prev = 3.0;
  std::string dims;
  for (int n : {9, 11, 15, 21}) {
    const double d = cross_corner(n, 2).dimension;
    c.expect(d < prev && d > 1.0, "dimension not decreasing toward 1 at n=" + std::to_string(n));
    prev = d;
    dims += (dims.empty() ? "" : ",") + fmt(d, 5);
  }
  c.note("dims " + dims);

  try {
    cross_corner(5, 2);
    c.expect(false, "cross_corner(5,2) should raise NoValidCornerCount");
  } catch (const Error& e) {
    c.expect(e.kind() == ErrorKind::NoValidCornerCount, "cross_corner(5,2) raised the wrong error");
  }

  const auto c7 = cross_corner(7, 2);
  c.expect(thick_shadow_check(c7.ifs, exact_mode()).thick, "cross_corner(7,2) not thick in exact mode");
  CheckOptions fl;
  fl.exact_fallback = false;
  const auto frep = thick_shadow_check(c7.ifs, fl);
  c.expect(frep.marginal_tests > 0, "cross_corner(7,2) float run should flag marginal tests");

  const auto t0 = Clock::now();
  int n3 = 0;
  for (int n = 3; n <= 15 && !n3; n += 2) {
    try {
      cross_corner(n, 3);
      n3 = n;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidCornerCount) throw;
    }
  }
  c.expect(n3 == 7 || n3 == 9, "smallest valid n for d=3 outside {7, 9}");
  if (n3) {
    const auto cc = cross_corner(n3, 3);
    c.expect(thick_shadow_check(cc.ifs, exact_mode()).thick, "d=3 case not thick");
    c.expect(disconnectedness_check(cc.ifs, 2, exact_mode()).certified, "d=3 case disconnectedness not certified");
    const double secs = seconds_since(t0);
    c.expect(secs < 300, "d=3 case took longer than 5 minutes");
    c.note("d=3 smallest n=" + std::to_string(n3) + " in " + fmt(secs, 3) + "s");
  }
}

void criterion_4(Criterion& c) {
  double prev_bound = 0.0;
  std::string bounds;
  for (int inv : {5, 10, 20}) {  // lambda decreasing
    const Rational lambda(1, inv);
    const auto ifs = simplex_ifs(standard_simplex_params(2, lambda));
    const auto rep = thick_shadow_check(ifs, exact_mode());
    c.expect(rep.thick && rep.tested_splits == 3, "2-simplex not thick over 3 splits at lambda=1/" + std::to_string(inv));
    const auto ifs3 = simplex_ifs(standard_simplex_params(3, lambda));
    const auto rep3 = thick_shadow_check(ifs3, exact_mode());
    c.expect(rep3.thick && rep3.tested_splits == 7, "3-simplex not thick over 7 splits at lambda=1/" + std::to_string(inv));

    for (const auto* sys : {&ifs, &ifs3}) {
      const auto bodies = iterate_bodies(*sys, 1);
      for (std::size_t i = 0; i < bodies.size(); ++i)
        for (std::size_t j = i + 1; j < bodies.size(); ++j)
          c.expect(!hulls_intersect(bodies[i], bodies[j]).intersect, "simplex images overlap");
    }

    const auto bound = affinity_bound_closed(ifs);
    c.expect(bound.has_value(), "closed bound missing");
    if (bound) {
      if (prev_bound > 0.0) c.expect(*bound <= prev_bound, "closed bound increases as lambda decreases");
      prev_bound = *bound;
      bounds += (bounds.empty() ? "" : ",") + fmt(*bound, 5);
      if (inv == 20)
        c.expect_known(*bound <= 1.25, "closed bound at lambda=1/20 is " + fmt(*bound, 5) + " > 1.25");
    }
    const double r1 = affinity_root(ifs, 1).root, r2 = affinity_root(ifs, 2).root;
    c.expect(r2 <= r1 + 1e-9, "affinity root increases from k=1 to k=2");
  }
  c.note("closed bounds at lambda=1/5,1/10,1/20: " + bounds);
}

void criterion_5(Criterion& c) {
  const auto eps = geometric_epsilons(Rational(1, 8), 12);
  for (int n = 1; n <= 12; ++n) {
    const auto vb = venetian_blind(eps, n, n == 12 ? 1000 : 2);
    // S_n = sum 2^j 8^-j = sum 4^-j.
    Rational s(0), four(1);
    for (int j = 1; j <= n; ++j) {
      four /= 4;
      s += four;
    }
    // Squared length of each blind times 4^n against 1 + S^2, exactly.
    Rational scale(1);
    for (int j = 0; j < n; ++j) scale *= 4;
    const auto& blinds = vb.E.back();
    bool radicand = blinds.size() == (std::size_t{1} << n);
    for (const auto& b : blinds) radicand = radicand && (b.b - b.a).squaredNorm() * scale == 1 + s * s;
    c.expect(radicand, "blind radicand mismatch at n=" + std::to_string(n));
    Rational vertical(0);
    for (const auto& v : vb.connectors) vertical += v.b(1) - v.a(1);
    c.expect(vertical == s, "connector length mismatch at n=" + std::to_string(n));

    double total = 0.0;
    for (const auto& b : blinds) total += std::sqrt(to_double(Rational((b.b - b.a).squaredNorm())));
    total += to_double(vertical);
    const double sd = to_double(s);
    const double closed = sd + std::sqrt(1 + sd * sd);
    c.expect(std::abs(total - closed) < 1e-12, "length mismatch at n=" + std::to_string(n));
    if (n == 1) {
      c.expect(std::abs(total - 1.2807764064044151) < 1e-12, "n=1 length is not 1.2807764...");
      c.note("n=1 length " + fmt(total, 10));
    }
    if (n == 12) {
      c.expect(vb.coverage.gaps.size() == 1000 && vb.coverage.max_gap == 0.0, "gap in the sweep over [0, pi/2]");
      c.expect(vb.reflected_coverage.max_gap == 0.0, "reflected union leaves a gap in [0, pi)");
      c.note("n=12 max gap " + fmt(vb.coverage.max_gap) + ", reflected " + fmt(vb.reflected_coverage.max_gap));
    }
  }
}

// Random system on a convex polygon: map i fixes vertex i, so the polygon is
// the hull of the attractor.
IFS<Rational> random_system(std::mt19937_64& rng, const Matrix<Rational>& polygon) {
  std::uniform_int_distribution<int> diag(2, 10), off(-4, 4);
  const ConvexPointSet<Rational> seed(polygon);
  std::vector<AffineMap<Rational>> maps;
  for (Eigen::Index i = 0; i < polygon.cols(); ++i) {
    for (;;) {
      Matrix<Rational> t(2, 2);
      t << Rational(diag(rng), 20), Rational(off(rng), 20), Rational(off(rng), 20), Rational(diag(rng), 20);
      if (determinant<Rational>(t) == 0 || !is_strict_contraction<Rational>(t)) continue;
      const Vector<Rational> v = polygon.col(i) - t * polygon.col(i);
      const Matrix<Rational> img = (t * polygon).colwise() + v;
      bool inside = true;
      for (Eigen::Index j = 0; j < img.cols() && inside; ++j) inside = contains_point(seed, Vector<Rational>(img.col(j)));
      if (!inside) continue;
      maps.push_back(make_affine_map(t, v));
      break;
    }
  }
  return make_ifs(std::move(maps), seed);
}

void criterion_6(Criterion& c) {
  std::vector<Matrix<Rational>> polygons(3);
  polygons[0].resize(2, 3);
  polygons[0] << 0, 1, 0, 0, 0, 1;
  polygons[1].resize(2, 4);
  polygons[1] << 0, 1, 1, 0, 0, 0, 1, 1;
  polygons[2].resize(2, 5);
  polygons[2] << 0, 1, 1, Rational(1, 2), 0, 0, 0, Rational(3, 5), 1, Rational(3, 5);

  std::mt19937_64 rng(20240601);
  int thick = 0, not_thick = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto ifs = random_system(rng, polygons[static_cast<std::size_t>(trial % 3)]);
    const auto rep = thick_shadow_check(ifs, exact_mode());
    const std::string tag = "system " + std::to_string(trial);
    if (rep.thick) {
      ++thick;
      const auto cov = empirical_coverage(ifs, 720, 4);
      c.expect(cov.max_gap == 0.0, tag + ": thick but level-4 sweep has a gap");
      continue;
    }
    ++not_thick;
    const Hyperplane<Rational> h = line_witness(ifs, rep);
    // Support queries, straight from the generators.
    Rational lo, hi;
    for (const auto& body : iterate_bodies(ifs, 1)) {
      interval_of(body, h.normal, lo, hi);
      c.expect(hi < h.offset || h.offset < lo, tag + ": witness meets an image");
    }
    interval_of(ifs.seed, h.normal, lo, hi);
    c.expect(lo <= h.offset && h.offset <= hi, tag + ": witness misses the seed");

    // Sweep a pencil of directions within pi/720 of the witness normal.
    const Vectord nd = cast_matrix<double>(h.normal);
    double theta = std::atan2(nd(1), nd(0));
    if (theta < 0) theta += std::numbers::pi;
    Matrixd dirs(2, 9);
    for (int j = 0; j < 9; ++j) dirs.col(j) = direction_at_angle(theta + (j - 4) * (std::numbers::pi / 720) / 4);
    const auto cov = empirical_coverage(ifs, dirs, 6);
    c.expect(cov.max_gap > 0.0, tag + ": no gap near the witness normal at level 6");
  }
  c.note(std::to_string(thick) + " thick, " + std::to_string(not_thick) + " not thick");
  c.expect(thick > 0 && not_thick > 0, "random sample did not produce both verdicts");
}

Matrix<Rational> random_hexagon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (;;) {
    std::vector<double> a(6);
    for (double& x : a) x = angle(rng);
    std::sort(a.begin(), a.end());
    Matrix<Rational> p(2, 6);
    for (int j = 0; j < 6; ++j) {
      p(0, j) = Rational(static_cast<long>(std::lround(500 + 500 * std::cos(a[static_cast<std::size_t>(j)]))), 1000);
      p(1, j) = Rational(static_cast<long>(std::lround(500 + 500 * std::sin(a[static_cast<std::size_t>(j)]))), 1000);
    }
    if (hull_vertices_2d(ConvexPointSet<Rational>(p)).cols() == 6) return p;
  }
}

void criterion_7(Criterion& c) {
  std::vector<std::pair<std::string, Matrix<Rational>>> shapes;
  Matrix<Rational> sq(2, 4);
  sq << 0, 1, 1, 0, 0, 0, 1, 1;
  shapes.emplace_back("square", sq);
  // Regular pentagon with vertices rounded to 1/1000.
  Matrix<Rational> pent(2, 5);
  for (int j = 0; j < 5; ++j) {
    const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * j / 5;
    pent(0, j) = Rational(static_cast<long>(std::lround(500 + 500 * std::cos(a))), 1000);
    pent(1, j) = Rational(static_cast<long>(std::lround(500 + 500 * std::sin(a))), 1000);
  }
  shapes.emplace_back("pentagon", pent);
  std::mt19937_64 rng(7);
  shapes.emplace_back("hexagon", random_hexagon(rng));

  for (const auto& [name, verts] : shapes) {
    const auto pu = polytope_union(verts, Rational(1, 5));
    c.expect(pu.members.size() == static_cast<std::size_t>(verts.cols() - 2), name + ": wrong number of simplices");
    std::vector<ConvexPointSet<double>> merged;
    std::vector<std::vector<ConvexPointSet<double>>> per_level(3);
    for (const auto& m : pu.members) {
      c.expect(thick_shadow_check(m, exact_mode()).thick, name + ": member not thick");
      c.expect(disconnectedness_check(m, 3).certified, name + ": member disconnectedness not certified");
      const IFS<double> f = cast_ifs<double>(m);
      for (int k = 1; k <= 3; ++k) {
        auto b = iterate_bodies(f, k);
        per_level[static_cast<std::size_t>(k - 1)].insert(per_level[static_cast<std::size_t>(k - 1)].end(), b.begin(), b.end());
      }
    }
    const ConvexPointSet<double> hull(cast_matrix<double>(verts));
    const auto cov = coverage_of_bodies(per_level[2], hull, sample_directions(2, 720), 3);
    c.expect(cov.max_gap == 0.0, name + ": merged sweep has a gap");

    // Components of the union of all members' level-k bodies shrink by a
    // uniform factor, as they do for each member.
    std::vector<double> diam;
    for (const auto& bodies : per_level) diam.push_back(component_decomposition(bodies, CheckOptions{}, 0).max_diameter());
    c.expect(diam[1] < diam[0] && diam[2] < diam[1], name + ": union components do not shrink");
    c.note(name + ": " + std::to_string(pu.members.size()) + " members, union diameters " + fmt(diam[0], 3) + "," +
           fmt(diam[1], 3) + "," + fmt(diam[2], 3));
  }
}

void criterion_8(Criterion& c) {
  std::vector<std::vector<double>> examples{
      {1.0 / 3, 1.0 / 3}, std::vector<double>(9, 0.2), {0.5, 0.25}, std::vector<double>(4, 0.5)};
  for (int n : {9, 11, 15, 21}) {
    const auto cc = cross_corner(n, 2);
    examples.emplace_back(cc.digits.size(), 1.0 / n);
  }
  examples.emplace_back(5, 0.35);
  double worst = 0.0;
  for (const auto& r : examples) {
    const double s = similarity_dimension(r);
    double acc = -1.0;
    for (double x : r) acc += std::pow(x, s);
    worst = std::max(worst, std::abs(acc));
  }
  c.expect(worst < 1e-12, "similarity residual " + fmt(worst));
  const double golden = similarity_dimension({0.5, 0.25});
  c.expect(std::abs(golden - std::log2(2 / (std::sqrt(5.0) - 1))) < 1e-12, "golden-ratio case off");
  c.note("worst residual " + fmt(worst, 3) + ", golden case " + fmt(golden, 8));

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_matrix = [&](Eigen::Index d, double target) {
    Matrixd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = g(rng);
    return Matrixd(m * (target / Eigen::JacobiSVD<Matrixd>(m).singularValues()(0)));
  };
  int sub_fail = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const Matrixd a = random_matrix(d, 0.05 + 0.9 * u(rng)), b = random_matrix(d, 0.05 + 0.9 * u(rng));
    const double s = u(rng) * static_cast<double>(d);
    const double lhs = singular_value_function(Matrixd(a * b), s);
    const double rhs = singular_value_function(a, s) * singular_value_function(b, s);
    sub_fail += lhs > rhs * (1 + 1e-12);
  }
  c.expect(sub_fail == 0, std::to_string(sub_fail) + " submultiplicativity violations");

  int det_fail = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    const Matrixd m = random_matrix(d, 0.05 + 0.9 * u(rng));
    double prod = 1.0;
    for (double a : singular_values(m)) prod *= a;
    const double det = std::abs(Eigen::FullPivLU<Matrixd>(m).determinant());
    det_fail += std::abs(prod - det) > 1e-10 * det;
  }
  c.expect(det_fail == 0, std::to_string(det_fail) + " determinant identity violations");
}

// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char ch : s) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return q + "'";
}

std::pair<int, std::string> run_cli(const std::vector<std::string>& args) {
  std::string cmd = "cd " + quote(GOLDEN_DIR) + " && " + quote(SHADOWLAB_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, out};
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void criterion_9(Criterion& c) {
  const auto cases = nlohmann::json::parse(slurp(std::string(GOLDEN_DIR) + "/cases.json"));
  int runs = 0;
  for (const auto& cs : cases) {
    const auto args = cs.at("args").get<std::vector<std::string>>();
    const std::string& cmd = args.front();
    if (cmd != "check" && cmd != "dims" && cmd != "render") continue;
    const auto a = run_cli(args), b = run_cli(args);
    const std::string name = cs.at("name");
    c.expect(a.first == cs.at("exit").get<int>(), name + ": exit " + std::to_string(a.first));
    c.expect(a == b, name + ": repeated runs differ");
    ++runs;
  }
  c.note(std::to_string(runs) + " golden commands run twice");
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  std::vector<std::pair<Criterion, std::function<void(Criterion&)>>> all{
      {{1, "Mendivil-Taylor characterization"}, criterion_1},
      {{2, "rotated square"}, criterion_2},
      {{3, "cross and corner"}, criterion_3},
      {{4, "simplex systems"}, criterion_4},
      {{5, "Venetian blind"}, criterion_5},
      {{6, "checker equivalence on random systems"}, criterion_6},
      {{7, "polytope union"}, criterion_7},
      {{8, "dimension utilities"}, criterion_8},
      {{9, "determinism"}, criterion_9},
  };
  int unexpected = 0, known = 0;
  for (auto& [c, run] : all) {
    const auto t0 = Clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << c.id << " (" << c.title << "): " << (c.passed() ? "PASS" : "FAIL") << "  ["
              << fmt(seconds_since(t0), 3) << "s]\n";
    for (const auto& n : c.notes) std::cout << "    " << n << "\n";
    for (const auto& f : c.failures) std::cout << "    failed: " << f << "\n";
    for (const auto& f : c.known_failures) std::cout << "    failed (known): " << f << "\n";
    std::cout.flush();
    unexpected += !c.failures.empty();
    known += !c.known_failures.empty();
  }
  std::cout << "summary: " << (9 - unexpected - known) << "/9 pass";
  if (known) std::cout << ", " << known << " with known failures";
  if (unexpected) std::cout << ", " << unexpected << " with unexpected failures";
  std::cout << "\n";
  return unexpected > 0 || (strict && known > 0) ? 1 : 0;
}
