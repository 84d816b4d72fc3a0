#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "topmeas/grid.hpp"

using namespace topmeas;

namespace {

CellSet cells(const GridSpace& g, std::initializer_list<std::pair<int, int>> rc) {
  CellSet s(g.cell_count());
  for (auto [r, c] : rc) s.set(g.cell_at(r, c));
  return s;
}

CellSet random_cells(const GridSpace& g, std::mt19937_64& rng, double density) {
  CellSet s(g.cell_count());
  std::bernoulli_distribution bit(density);
  for (int c = 0; c < g.cell_count(); ++c)
    if (bit(rng)) s.set(c);
  return s;
}

}  // namespace

TEST_CASE("grid basics") {
  CHECK_THROWS_AS(GridSpace(1), ContractViolation);
  GridSpace g(4);
  CHECK(g.cell_width() == doctest::Approx(0.25));
  CHECK(g.cell_count() == 16);
  CHECK(g.center(0).first == doctest::Approx(0.125));
  CHECK(g.center_distance(g.cell_at(0, 0), g.cell_at(0, 2)) ==
        doctest::Approx(0.5));
}

TEST_CASE("interior and closure flip kinds and are idempotent") {
  GridSpace g(4);
  const Region full = Region::whole(g, Kind::Compact);
  CHECK(interior(full).kind == Kind::Open);
  CHECK(interior(full).cells == full.cells);
  CHECK(interior(interior(full)) == interior(full));
  CHECK(closure(interior(full)).kind == Kind::Compact);

  const Region empty_c = Region::empty(g, Kind::Compact);
  CHECK(interior(empty_c).is_empty());
  CHECK(interior(empty_c).kind == Kind::Open);

  const Region single = Region::compact(g, cells(g, {{1, 1}}));
  CHECK(interior(single).cells == single.cells);
}

TEST_CASE("components use 8-adjacency for compacts and 4 for opens") {
  GridSpace g(4);
  const CellSet corner_pair = cells(g, {{0, 0}, {1, 1}});
  CHECK(components(Region::compact(g, corner_pair)).size() == 1);
  CHECK(components(Region::open(g, corner_pair)).size() == 2);
  CHECK(components(Region::empty(g, Kind::Compact)).empty());

  // partition: the union of components is the input
  std::mt19937_64 rng(7);
  for (int it = 0; it < 50; ++it) {
    const CellSet s = random_cells(g, rng, 0.4);
    for (Kind k : {Kind::Open, Kind::Compact}) {
      const auto comps = components(Region(g, k, s));
      CellSet u(g.cell_count());
      int total = 0;
      for (const auto& c : comps) {
        CHECK_FALSE(c.cells.intersects(u));  // pairwise disjoint
        u |= c.cells;
        total += c.cell_count();
      }
      CHECK(u == s);
      CHECK(total == s.count());
    }
  }
}

TEST_CASE("component order is by smallest cell index") {
  GridSpace g(4);
  const CellSet two = cells(g, {{3, 3}, {0, 0}});
  const auto comps = components(Region::open(g, two));
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].cells.lowest() == g.cell_at(0, 0));
  CHECK(comps[1].cells.lowest() == g.cell_at(3, 3));
}

TEST_CASE("contains_point ignores the kind") {
  GridSpace g(4);
  const PointRef p{g.cell_at(2, 2)};
  CellSet s(g.cell_count());
  s.set(p.cell);
  CHECK(contains_point(Region::open(g, s), p));
  CHECK(contains_point(Region::compact(g, s), p));
  CHECK(contains_point(Region::whole(g, Kind::Open), p));
  CHECK_FALSE(contains_point(Region::empty(g, Kind::Open), p));
}

TEST_CASE("contains_region is the 8-erosion rule") {
  GridSpace g(5);
  const Region inner = Region::compact(g, cells(g, {{2, 2}}));
  CellSet nb(g.cell_count());
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c) nb.set(g.cell_at(r, c));
  CHECK(contains_region(Region::open(g, nb), inner));

  // inner on the rim of the outer cell set fails
  const Region rim_outer = Region::open(g, nb);
  const Region rim_inner = Region::compact(g, cells(g, {{1, 1}}));
  CHECK_FALSE(contains_region(rim_outer, rim_inner));

  CHECK(contains_region(rim_outer, Region::empty(g, Kind::Compact)));
  CHECK_THROWS_AS(contains_region(inner, inner), ContractViolation);
}

TEST_CASE("containment composes through closures") {
  GridSpace g(5);
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const CellSet k = random_cells(g, rng, 0.2);
    const CellSet u = k | random_cells(g, rng, 0.4);
    const CellSet v = u | random_cells(g, rng, 0.5);
    const Region K = Region::compact(g, k);
    const Region U = Region::open(g, u);
    const Region V = Region::open(g, v);
    if (contains_region(U, K) && contains_region(V, closure(U)))
      CHECK(contains_region(V, K));
  }
}

TEST_CASE("solidity") {
  GridSpace g(4);
  CHECK(is_solid(Region::compact(g, cells(g, {{1, 1}}))));
  CHECK(is_solid(Region::whole(g, Kind::Compact)));  // empty complement
  CHECK_FALSE(is_solid(Region::empty(g, Kind::Compact)));

  // a closed ring around a hole is not solid: the complement splits
  GridSpace g5(5);
  CellSet ring(g5.cell_count());
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c)
      if (r != 2 || c != 2) ring.set(g5.cell_at(r, c));
  const Region ring_region = Region::compact(g5, ring);
  CHECK_FALSE(is_solid(ring_region));
  CHECK(components(complement(ring_region)).size() == 2);

  // solid implies connected
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    const CellSet s = random_cells(g5, rng, 0.5);
    for (Kind k : {Kind::Open, Kind::Compact}) {
      const Region r(g5, k, s);
      if (is_solid(r)) CHECK(components(r).size() == 1);
    }
  }
}

TEST_CASE("dilate: center-distance rule") {
  GridSpace g(4);
  const double h = g.cell_width();
  CHECK(dilate(Region::empty(g, Kind::Compact), 0.5).is_empty());
  CHECK_THROWS_AS(dilate(Region::whole(g, Kind::Compact), 0.0),
                  ContractViolation);

  // t = 1.6 h picks up the 4-neighbors (distance h) and the diagonals
  // (distance h*sqrt(2) < 1.6 h) but not distance-2h cells
  const Region single = Region::compact(g, cells(g, {{1, 1}}));
  const Region d = dilate(single, 1.6 * h);
  CHECK(d.kind == Kind::Open);
  CHECK(d.cell_count() == 9);
  for (int r = 0; r <= 2; ++r)
    for (int c = 0; c <= 2; ++c) CHECK(d.cells.test(g.cell_at(r, c)));
  CHECK_FALSE(d.cells.test(g.cell_at(1, 3)));

  CHECK(dilate(Region::whole(g, Kind::Compact), h).cells ==
        CellSet::full(g.cell_count()));
}

TEST_CASE("dilate monotonicity and composition") {
  GridSpace g(6);
  std::mt19937_64 rng(17);
  for (int it = 0; it < 60; ++it) {
    const CellSet a = random_cells(g, rng, 0.15);
    const CellSet b = a | random_cells(g, rng, 0.2);
    std::uniform_real_distribution<double> td(0.05, 0.6);
    const double t = td(rng), s = td(rng);
    const Region ra = Region::compact(g, a), rb = Region::compact(g, b);
    if (!a.none()) {
      CHECK(dilate(ra, t).cells.is_subset_of(dilate(rb, t).cells));
      CHECK(dilate(ra, t).cells.is_subset_of(dilate(ra, t + s).cells));
      // two small dilations stay inside one big one
      const Region once = dilate(ra, t);
      CHECK(dilate(once, s).cells.is_subset_of(dilate(ra, t + s).cells));
    }
  }
}

TEST_CASE("sandwich interpolates compact-in-open nestings") {
  GridSpace g(5);
  const Region k = Region::compact(g, cells(g, {{2, 2}}));
  const Region u = Region::whole(g, Kind::Open);
  const auto sw = sandwich(k, u);
  CHECK_FALSE(sw.degenerate);
  CHECK(contains_region(sw.v, k));
  CHECK(sw.c.cells == sw.v.cells);
  CHECK(contains_region(u, sw.c));
  // V is the full 3x3 neighborhood of the center cell
  CHECK(sw.v.cell_count() == 9);

  CHECK(sandwich(Region::empty(g, Kind::Compact), u).v.is_empty());

  const Region tight = Region::open(g, closure8(g, k.cells));
  CHECK_THROWS_WITH_AS(
      sandwich(Region::compact(g, closure8(g, k.cells)), tight), "not nested",
      std::runtime_error);
}

TEST_CASE("complement is an involution that flips kinds") {
  GridSpace g(4);
  std::mt19937_64 rng(23);
  for (int it = 0; it < 50; ++it) {
    const CellSet s = random_cells(g, rng, 0.5);
    const Region r = Region::open(g, s);
    CHECK(complement(r).kind == Kind::Compact);
    CHECK(complement(complement(r)) == r);
    CHECK((complement(r).cells & r.cells).none());
    CHECK((complement(r).cells | r.cells) == CellSet::full(g.cell_count()));
  }
}

TEST_CASE("squared distances match brute force") {
  GridSpace g(9);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    const CellSet src = random_cells(g, rng, 0.1);
    if (src.none()) continue;
    const auto sqd = squared_cell_distances(g, src);
    for (int c = 0; c < g.cell_count(); ++c) {
      double best = 1e18;
      src.for_each([&](int s) {
        const double dr = g.row_of(c) - g.row_of(s);
        const double dc = g.col_of(c) - g.col_of(s);
        best = std::min(best, dr * dr + dc * dc);
      });
      CHECK(sqd[c] == doctest::Approx(best));
    }
  }
}
