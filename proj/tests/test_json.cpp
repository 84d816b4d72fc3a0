#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "topmeas/json_io.hpp"

using namespace topmeas;

TEST_CASE("region serialization round-trips") {
  GridSpace g(5);
  std::mt19937_64 rng(3);
  std::bernoulli_distribution bit(0.4);
  for (int it = 0; it < 30; ++it) {
    CellSet s(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c)
      if (bit(rng)) s.set(c);
    const Region r(g, bit(rng) ? Kind::Open : Kind::Compact, s);
    CHECK(region_from_json(region_to_json(r)) == r);
  }
  CHECK_THROWS_AS(region_from_json(json{{"kind", "closed"},
                                        {"n", 3},
                                        {"cells", json::array()}}),
                  ContractViolation);
  CHECK_THROWS_AS(
      region_from_json(json{{"kind", "open"}, {"n", 3}, {"cells", {99}}}),
      ContractViolation);
}

TEST_CASE("evaluator descriptors rebuild identical evaluators") {
  GridSpace g(4);
  CellSet d(g.cell_count());
  d.set(g.cell_at(1, 1));
  d.set(g.cell_at(2, 1));
  std::vector<DtmEvaluator> pool{
      point_mass(g, {g.cell_at(2, 3)}),
      uniform_radon(g),
      indicator_dtm(Region::compact(g, d)),
      combine({{0.5, point_mass(g, {0})}, {0.5, uniform_radon(g)}}),
      extend(nvssf(g, {{1}, {6}, {11}}, 1)),
  };
  std::mt19937_64 rng(9);
  std::bernoulli_distribution bit(0.5);
  for (const auto& m : pool) {
    const DtmEvaluator back = evaluator_from_json(evaluator_to_json(m));
    for (int it = 0; it < 40; ++it) {
      CellSet s(g.cell_count());
      for (int c = 0; c < g.cell_count(); ++c)
        if (bit(rng)) s.set(c);
      const Region r(g, bit(rng) ? Kind::Open : Kind::Compact, s);
      CHECK(back(r) == m(r));
    }
  }
}

TEST_CASE("function builders from json") {
  const json cone{{"grid_n", 4}, {"type", "cone"}, {"apex", 5}};
  const GridFunction f = function_from_json(cone);
  CHECK(f.at(5) == 0.0);
  CHECK(f.values.size() == 16);
  const GridFunction back =
      function_from_json(function_to_json(f));
  CHECK(back.values == f.values);
  CHECK_THROWS_AS(function_from_json(json{{"grid_n", 4}, {"type", "wavelet"}}),
                  ContractViolation);
}

TEST_CASE("axiom reports serialize their witnesses") {
  GridSpace g(3);
  CellSet d(g.cell_count());
  d.set(0);
  d.set(1);
  const AxiomReport tm =
      verify_tm(indicator_dtm(Region::compact(g, d)), Budget::exhaustive());
  const json j = axiom_report_to_json(tm);
  CHECK(j["axiom"] == "TM");
  CHECK(j["verdict"] == "fail");
  CHECK(j["witness"]["regions"].size() == 2);
  CHECK(j["sets_checked"].get<long long>() > 0);
}
