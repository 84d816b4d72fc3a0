#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "topmeas/measures.hpp"

using namespace topmeas;

namespace {

Region single(const GridSpace& g, int r, int c, Kind k = Kind::Compact) {
  CellSet s(g.cell_count());
  s.set(g.cell_at(r, c));
  return Region(g, k, s);
}

const AxiomReport& find_report(const std::vector<AxiomReport>& reports,
                               const std::string& axiom) {
  for (const auto& r : reports)
    if (r.axiom == axiom) return r;
  REQUIRE(false);
  return reports.front();
}

}  // namespace

TEST_CASE("point mass evaluates by center membership") {
  GridSpace g(4);
  const PointRef a{g.cell_at(1, 2)};
  const DtmEvaluator m = point_mass(g, a);
  CHECK(m(Region::whole(g, Kind::Compact)) == 1.0);
  CHECK(m(Region::empty(g, Kind::Open)) == 0.0);
  CHECK(m(single(g, 1, 2, Kind::Compact)) == 1.0);
  CHECK(m(single(g, 1, 2, Kind::Open)) == 1.0);  // center is interior
  CHECK(m(single(g, 0, 0)) == 0.0);
  CHECK(norm_of(m) == 1.0);
}

TEST_CASE("radon weights sum cell masses, kind-independent") {
  GridSpace g(4);
  const DtmEvaluator u = uniform_radon(g);
  CHECK(norm_of(u) == doctest::Approx(1.0));
  CHECK(u(Region::empty(g, Kind::Compact)) == 0.0);

  CellSet half(g.cell_count());
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) half.set(g.cell_at(r, c));
  CHECK(u(Region::compact(g, half)) == doctest::Approx(0.5));
  CHECK(u(Region::open(g, half)) == doctest::Approx(0.5));

  CHECK_THROWS_AS(radon_from_weights(g, {1.0, 2.0}), ContractViolation);
  std::vector<double> bad(g.cell_count(), 1.0);
  bad[3] = -0.5;
  CHECK_THROWS_AS(radon_from_weights(g, bad), ContractViolation);
}

TEST_CASE("indicator evaluator") {
  GridSpace g(3);
  CellSet d(g.cell_count());
  d.set(g.cell_at(0, 0));
  d.set(g.cell_at(0, 1));
  const Region dreg = Region::compact(g, d);
  const DtmEvaluator nu = indicator_dtm(dreg);

  CHECK(nu(closure(dreg)) == 1.0);
  // same cell set as an open region: the carrier touches its rim
  CHECK(nu(interior(dreg)) == 0.0);
  CHECK(nu(Region::whole(g, Kind::Open)) == 1.0);
  CHECK(nu(Region::whole(g, Kind::Compact)) == 1.0);
  CHECK(norm_of(nu) == 1.0);

  CHECK_THROWS_AS(indicator_dtm(Region::empty(g, Kind::Compact)),
                  ContractViolation);
  CHECK_THROWS_AS(indicator_dtm(Region::open(g, d)), ContractViolation);
  // two cells sharing only a corner are still 8-connected
  CellSet corner_pair(g.cell_count());
  corner_pair.set(g.cell_at(0, 0));
  corner_pair.set(g.cell_at(1, 1));
  CHECK_NOTHROW(indicator_dtm(Region::compact(g, corner_pair)));
}

TEST_CASE("combine is linear region-wise") {
  GridSpace g(4);
  const DtmEvaluator a = point_mass(g, {g.cell_at(0, 0)});
  const DtmEvaluator b = point_mass(g, {g.cell_at(3, 3)});
  const DtmEvaluator mix = combine({{0.5, a}, {0.5, b}});

  std::mt19937_64 rng(5);
  std::bernoulli_distribution bit(0.5);
  for (int it = 0; it < 100; ++it) {
    CellSet s(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c)
      if (bit(rng)) s.set(c);
    const Region r(g, bit(rng) ? Kind::Open : Kind::Compact, s);
    const double v = mix(r);
    CHECK(v == doctest::Approx(0.5 * a(r) + 0.5 * b(r)));
    CHECK((v == 0.0 || v == 0.5 || v == 1.0));
  }

  const DtmEvaluator same = combine({{1.0, a}});
  for (int c = 0; c < g.cell_count(); ++c) {
    const Region r = single(g, g.row_of(c), g.col_of(c));
    CHECK(same(r) == a(r));
  }
  CHECK(norm_of(combine({{2.0, a}})) == 2.0);
  CHECK_THROWS_AS(combine({{-1.0, a}}), ContractViolation);
}

TEST_CASE("exhaustive axiom verification passes for measure-like builtins") {
  GridSpace g(3);
  for (const DtmEvaluator& m :
       {uniform_radon(g), point_mass(g, {g.cell_at(1, 1)}),
        combine({{0.25, point_mass(g, {0})}, {0.75, uniform_radon(g)}})}) {
    const auto reports = verify_dtm_axioms(m, Budget::exhaustive());
    for (const auto& r : reports) {
      INFO(m.name(), " axiom ", r.axiom);
      CHECK(r.pass);
      CHECK(r.sets_checked > 0);
    }
    CHECK(verify_tm(m, Budget::exhaustive()).pass);
    CHECK(verify_measure(m, Budget::exhaustive()).pass);
  }
}

TEST_CASE("exhaustive axiom verification passes for the indicator") {
  GridSpace g(3);
  CellSet d(g.cell_count());
  d.set(g.cell_at(1, 0));
  d.set(g.cell_at(1, 1));
  const DtmEvaluator nu = indicator_dtm(Region::compact(g, d));
  CHECK(all_pass(verify_dtm_axioms(nu, Budget::exhaustive())));

  const AxiomReport tm = verify_tm(nu, Budget::exhaustive());
  CHECK_FALSE(tm.pass);
  REQUIRE(tm.witness.has_value());
  REQUIRE(tm.witness->regions.size() == 2);
  // re-evaluating the witness reproduces the slack
  const double lhs = nu(tm.witness->regions[0]) + nu(tm.witness->regions[1]);
  CHECK(lhs - norm_of(nu) == doctest::Approx(tm.margin));
  CHECK(tm.margin < -kAxiomTol);

  CHECK_FALSE(verify_measure(nu, Budget::exhaustive()).pass);
}

TEST_CASE("a corrupted evaluator fails additivity at the empty pair") {
  GridSpace g(3);
  const DtmEvaluator corrupt(
      "corrupt", g, [](const Region&) { return 1.0; }, {});
  const auto reports = verify_dtm_axioms(corrupt, Budget::exhaustive());
  const AxiomReport& dtm1 = find_report(reports, "DTM1");
  CHECK_FALSE(dtm1.pass);
  REQUIRE(dtm1.witness.has_value());
  CHECK(dtm1.witness->regions[0].is_empty());
  CHECK(dtm1.witness->regions[1].is_empty());
  CHECK_FALSE(find_report(reports, "empty-zero").pass);
}

TEST_CASE("annihilates_points") {
  GridSpace g(3);
  CHECK_FALSE(annihilates_points(point_mass(g, {4})));
  CHECK_FALSE(annihilates_points(uniform_radon(g)));
  CellSet d(g.cell_count());
  d.set(g.cell_at(0, 0));
  d.set(g.cell_at(0, 1));
  CHECK(annihilates_points(indicator_dtm(Region::compact(g, d))));
}

TEST_CASE("sampled budgets are deterministic given the seed") {
  GridSpace g(6);
  const DtmEvaluator m = uniform_radon(g);
  const auto a = verify_dtm_axioms(m, Budget::sampled(200, 42));
  const auto b = verify_dtm_axioms(m, Budget::sampled(200, 42));
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].margin == b[i].margin);
    CHECK(a[i].sets_checked == b[i].sets_checked);
    CHECK(a[i].pass == b[i].pass);
    CHECK(a[i].seed == 42);
  }
  CHECK(all_pass(a));
}

TEST_CASE("exhaustive budget is rejected beyond n = 4") {
  GridSpace g(5);
  CHECK_THROWS_AS(verify_dtm_axioms(uniform_radon(g), Budget::exhaustive()),
                  ContractViolation);
}

TEST_CASE("additivity over separated compacts holds for builtins") {
  GridSpace g(5);
  CellSet d(g.cell_count());
  d.set(g.cell_at(2, 2));
  d.set(g.cell_at(2, 3));
  std::vector<DtmEvaluator> pool{
      uniform_radon(g), point_mass(g, {g.cell_at(1, 1)}),
      indicator_dtm(Region::compact(g, d)),
      combine({{0.3, point_mass(g, {0})}, {0.7, uniform_radon(g)}})};

  std::mt19937_64 rng(9);
  std::bernoulli_distribution bit(0.3);
  for (int it = 0; it < 200; ++it) {
    CellSet a(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c)
      if (bit(rng)) a.set(c);
    CellSet b(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c)
      if (bit(rng)) b.set(c);
    b = b.minus(closure8(g, a));
    for (const auto& m : pool) {
      const double lhs = m(Region::compact(g, a | b));
      const double rhs = m(Region::compact(g, a)) + m(Region::compact(g, b));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}
