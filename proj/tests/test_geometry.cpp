#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wulff/geometry.hpp"
#include "wulff/rng.hpp"

using namespace wulff;

namespace {

std::vector<Halfspace> box_planes(int dim, double r = 1.0) {
  std::vector<Halfspace> hs;
  for (int a = 0; a < dim; ++a)
    for (int s = -1; s <= 1; s += 2) {
      Vec n(0, 0, 0);
      n[a] = s;
      hs.emplace_back(n, r);
    }
  return hs;
}

ConvexPolytope make_cube() {
  return intersect_halfspaces(box_planes(3), 3).polytope;
}

// Random bounded halfspace set: unit directions at radii in [0.7, 1.3].
ConvexPolytope random_poly(int dim, Rng& rng, int planes = 12) {
  for (;;) {
    std::vector<Halfspace> hs;
    for (int i = 0; i < planes; ++i)
      hs.emplace_back(rng.unit_vector(dim), rng.uniform(0.7, 1.3));
    try {
      return intersect_halfspaces(hs, dim).polytope;
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace

TEST_CASE("cube from six halfspaces") {
  auto res = intersect_halfspaces(box_planes(3), 3);
  const ConvexPolytope& p = res.polytope;
  CHECK(res.dropped.empty());
  CHECK(p.vertices().size() == 8);
  CHECK(p.facets().size() == 6);
  CHECK(p.ridges().size() == 12);
  CHECK(p.volume() == doctest::Approx(8.0).epsilon(1e-13));
  for (const Ridge& r : p.ridges()) {
    CHECK(r.measure == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.dihedral == doctest::Approx(3.14159265358979 / 2).epsilon(1e-12));
    CHECK(r.signed_dist == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("square from four halfspaces") {
  auto res = intersect_halfspaces(box_planes(2), 2);
  CHECK(res.polytope.volume() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(res.polytope.vertices().size() == 4);
  CHECK(res.polytope.ridges().size() == 4);
  for (const Ridge& r : res.polytope.ridges()) {
    CHECK(r.measure == 1.0);
    CHECK(r.signed_dist == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("inactive halfspaces are dropped and reported") {
  auto hs = box_planes(3);
  hs.emplace_back(Vec(1, 0, 0), 10.0);  // far outside
  auto res = intersect_halfspaces(hs, 3);
  REQUIRE(res.dropped.size() == 1);
  CHECK(res.dropped[0] == 6);
  CHECK(res.polytope.facets().size() == 6);
}

TEST_CASE("unbounded and empty intersections are errors") {
  std::vector<Halfspace> open = {Halfspace(Vec(1, 0, 0), 1.0),
                                 Halfspace(Vec(0, 1, 0), 1.0),
                                 Halfspace(Vec(0, 0, 1), 1.0)};
  CHECK_THROWS_AS((void)intersect_halfspaces(open, 3), Error);
  std::vector<Halfspace> gap = {Halfspace(Vec(1, 0, 0), -1.0),
                                Halfspace(Vec(-1, 0, 0), -1.0)};
  CHECK_THROWS_AS((void)intersect_halfspaces(gap, 3), Error);
}

TEST_CASE("truncated cube volume against Monte-Carlo") {
  auto hs = box_planes(3);
  hs.emplace_back(Vec(1, 1, 1), 2.5);
  auto p = intersect_halfspaces(hs, 3).polytope;
  CHECK(p.volume() == doctest::Approx(8.0 - 1.0 / 48.0).epsilon(1e-12));
  auto mc = oracles::mc_volume(p, 10'000'000, 11);
  CHECK(std::fabs(p.volume() - mc.value) <= 3.0 * mc.sigma);
}

TEST_CASE("random polytope volume against Monte-Carlo") {
  Rng rng(99);
  for (int rep = 0; rep < 3; ++rep) {
    ConvexPolytope p = random_poly(3, rng);
    auto mc = oracles::mc_volume(p, 4'000'000, 1000 + rep);
    CHECK(std::fabs(p.volume() - mc.value) <= 3.0 * mc.sigma);
  }
  ConvexPolytope q = random_poly(2, rng, 8);
  auto mc2 = oracles::mc_volume(q, 4'000'000, 77);
  CHECK(std::fabs(q.volume() - mc2.value) <= 3.0 * mc2.sigma);
}

TEST_CASE("clip basics") {
  ConvexPolytope cube = make_cube();
  auto lower = clip(cube, Halfspace(Vec(0, 0, 1), 0.0));
  REQUIRE(lower.has_value());
  CHECK(lower->volume() == doctest::Approx(4.0).epsilon(1e-13));

  auto self = clip(cube, std::span<const Halfspace>(cube.halfspaces()));
  REQUIRE(self.has_value());
  CHECK(self->volume() ==
        doctest::Approx(cube.volume()).epsilon(1e-12));

  auto gone = clip(cube, Halfspace(Vec(1, 0, 0), -2.0));
  CHECK(!gone.has_value());
}

TEST_CASE("intersection of shifted cubes") {
  ConvexPolytope cube = make_cube();
  ConvexPolytope shifted = cube.translated(Vec(0.5, 0, 0));
  auto inter = intersect(cube, shifted);
  REQUIRE(inter.has_value());
  CHECK(inter->volume() == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(intersection_volume(cube, shifted) ==
        doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("clip additivity across a plane") {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    int dim = rep % 2 == 0 ? 3 : 2;
    ConvexPolytope p = random_poly(dim, rng, dim == 3 ? 12 : 8);
    Halfspace h(rng.unit_vector(dim), rng.uniform(-0.2, 0.2));
    Halfspace neg(-1.0 * h.normal, -h.offset);
    auto a = clip(p, h);
    auto b = clip(p, neg);
    double va = a ? a->volume() : 0.0;
    double vb = b ? b->volume() : 0.0;
    CHECK(va + vb == doctest::Approx(p.volume()).epsilon(1e-10));
  }
}

TEST_CASE("symmetric difference volumes") {
  ConvexPolytope cube = make_cube();
  CellComplex e(cube);
  CHECK(symmetric_difference_volume(e, cube) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(symmetric_difference_volume(e, cube.translated(Vec(0.5, 0, 0))) ==
        doctest::Approx(4.0).epsilon(1e-12));

  // Partition invariance: cube split at x_1 = 0 against the cube itself.
  auto left = clip(cube, Halfspace(Vec(1, 0, 0), 0.0));
  auto right = clip(cube, Halfspace(Vec(-1, 0, 0), 0.0));
  CellComplex split(3, {*left, *right});
  CHECK(split.volume() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(symmetric_difference_volume(split, cube) ==
        doctest::Approx(0.0).epsilon(1e-10));
  split.validate_disjoint(1e-9);
}

TEST_CASE("overlapping cells are rejected") {
  ConvexPolytope cube = make_cube();
  CellComplex bad(3, {cube, cube.translated(Vec(0.5, 0, 0))});
  CHECK_THROWS_AS(bad.validate_disjoint(1e-9), Error);
}

TEST_CASE("simplex decomposition") {
  // A tetrahedron decomposes into itself.
  std::vector<Halfspace> tet = {
      Halfspace(Vec(-1, 0, 0), 0.0), Halfspace(Vec(0, -1, 0), 0.0),
      Halfspace(Vec(0, 0, -1), 0.0), Halfspace(Vec(1, 1, 1), 1.0)};
  auto t = intersect_halfspaces(tet, 3).polytope;
  auto dec_t = simplex_decompose(t);
  CHECK(dec_t.size() == 1);
  CHECK(dec_t[0].volume() == doctest::Approx(t.volume()).epsilon(1e-12));

  ConvexPolytope cube = make_cube();
  auto dec = simplex_decompose(cube);
  CHECK(dec.size() == 12);
  double sum = 0;
  for (const Simplex& s : dec) sum += s.volume();
  CHECK(sum == doctest::Approx(8.0).epsilon(1e-13));

  Rng rng(5);
  for (int rep = 0; rep < 6; ++rep) {
    int dim = rep % 2 == 0 ? 3 : 2;
    ConvexPolytope p = random_poly(dim, rng, dim == 3 ? 14 : 9);
    double total = 0;
    for (const Simplex& s : simplex_decompose(p)) total += s.volume();
    CHECK(total == doctest::Approx(p.volume()).epsilon(1e-10));
  }
}

TEST_CASE("round-trip reproduces the vertex set") {
  Rng rng(6);
  for (int rep = 0; rep < 8; ++rep) {
    int dim = rep % 2 == 0 ? 3 : 2;
    ConvexPolytope p = random_poly(dim, rng, dim == 3 ? 12 : 8);
    ConvexPolytope q =
        intersect_halfspaces(p.halfspaces(), dim).polytope;
    REQUIRE(q.vertices().size() == p.vertices().size());
    for (const Vec& v : p.vertices()) {
      double best = 1e300;
      for (const Vec& w : q.vertices()) best = std::min(best, distance(v, w));
      CHECK(best <= 1e-9);
    }
  }
}

TEST_CASE("vertices against subset-enumeration oracle") {
  Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    int dim = rep % 2 == 0 ? 3 : 2;
    ConvexPolytope p = random_poly(dim, rng, dim == 3 ? 10 : 7);
    auto oracle = oracles::brute_force_vertices(p.halfspaces(), dim);
    REQUIRE(oracle.size() == p.vertices().size());
    for (const Vec& v : p.vertices()) {
      double best = 1e300;
      for (const Vec& w : oracle) best = std::min(best, distance(v, w));
      CHECK(best <= 1e-7);
    }
  }
}

TEST_CASE("euler relation and divergence identity") {
  Rng rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    ConvexPolytope p = random_poly(3, rng);
    int v = static_cast<int>(p.vertices().size());
    int f = static_cast<int>(p.facets().size());
    int e = static_cast<int>(p.ridges().size());
    CHECK(v - e + f == 2);

    Vec flux(0, 0, 0);
    double total_area = 0;
    for (const Facet& fa : p.facets()) {
      flux += fa.area * fa.normal;
      total_area += fa.area;
    }
    CHECK(norm(flux) <= 1e-10 * total_area);
  }
}

TEST_CASE("ridge data is symmetric in the facet pair") {
  // Reversing the halfspace order relabels facets; measures and angles of
  // matching pairs must agree.
  Rng rng(9);
  ConvexPolytope p = random_poly(3, rng);
  std::vector<Halfspace> rev(p.halfspaces().rbegin(), p.halfspaces().rend());
  ConvexPolytope q = intersect_halfspaces(rev, 3).polytope;
  int n = static_cast<int>(p.facets().size());
  for (const Ridge& r : p.ridges()) {
    int qi = n - 1 - r.facet_i;
    int qj = n - 1 - r.facet_j;
    bool found = false;
    for (const Ridge& s : q.ridges()) {
      if ((s.facet_i == qi && s.facet_j == qj) ||
          (s.facet_i == qj && s.facet_j == qi)) {
        CHECK(s.measure == doctest::Approx(r.measure).epsilon(1e-9));
        CHECK(s.dihedral == doctest::Approx(r.dihedral).epsilon(1e-9));
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("scaling and translation") {
  ConvexPolytope cube = make_cube();
  CHECK(cube.scaled(0.5).volume() == doctest::Approx(1.0).epsilon(1e-12));
  ConvexPolytope moved = cube.translated(Vec(0.3, -0.2, 0.1));
  CHECK(moved.volume() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(norm(moved.centroid() - Vec(0.3, -0.2, 0.1)) <= 1e-12);
}

TEST_CASE("convex hull of jittered cube corners") {
  Rng rng(10);
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i)
    pts.emplace_back(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1);
  pts.push_back(Vec(0, 0, 0));  // interior point must not matter
  ConvexPolytope hull = convex_hull(pts, 3);
  CHECK(hull.volume() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(hull.vertices().size() == 8);

  for (Vec& p : pts)
    for (int c = 0; c < 3; ++c) p[c] += 0.1 * rng.uniform(-1.0, 1.0);
  ConvexPolytope jit = convex_hull(pts, 3);
  CHECK(jit.volume() > 5.0);
  auto mc = oracles::mc_volume(jit, 2'000'000, 31);
  CHECK(std::fabs(jit.volume() - mc.value) <= 3.0 * mc.sigma);
}
