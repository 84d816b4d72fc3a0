#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "topmeas/families.hpp"
#include "topmeas/solid.hpp"

using namespace topmeas;

TEST_CASE("variation bound is the sup of member norms") {
  GridSpace g(6);
  const PointRef a{g.cell_at(3, 3)};
  CHECK(variation_bound({"points", {point_mass(g, a), point_mass(g, {0})}}) ==
        1.0);
  CHECK(variation_bound(
            {"mixed", {combine({{2.0, point_mass(g, a)}}), uniform_radon(g)}}) ==
        2.0);
  // the bound of a union is the max of the bounds
  const MeasureFamily f1{"a", {uniform_radon(g)}};
  const MeasureFamily f2{"b", {combine({{1.5, point_mass(g, a)}})}};
  MeasureFamily both{"ab", f1.members};
  both.members.insert(both.members.end(), f2.members.begin(), f2.members.end());
  CHECK(variation_bound(both) ==
        std::max(variation_bound(f1), variation_bound(f2)));
  CHECK_THROWS_AS(variation_bound({"empty", {}}), ContractViolation);
}

TEST_CASE("tightness witnesses") {
  GridSpace g(8);
  const PointRef a{g.cell_at(3, 3)};
  const MeasureFamily single{"delta", {point_mass(g, a)}};

  SUBCASE("the carrier cell suffices in both modes") {
    const auto abs = tightness_witness(single, 0.5, TightnessMode::Absolute);
    REQUIRE(abs.has_value());
    CHECK(abs->cell_count() == 1);
    CHECK(contains_point(*abs, a));
    const auto cls = tightness_witness(single, 0.5, TightnessMode::Classical);
    REQUIRE(cls.has_value());
    CHECK(cls->cell_count() == 1);
  }
  SUBCASE("classical mode always succeeds on a compact carrier") {
    const MeasureFamily fam{
        "mixed",
        {uniform_radon(g), point_mass(g, a),
         combine({{0.5, uniform_radon(g)}, {0.5, point_mass(g, {0})}})}};
    for (double eps : {0.01, 0.1, 0.9})
      CHECK(tightness_witness(fam, eps, TightnessMode::Classical).has_value());
  }
  SUBCASE("absolute mode fails once epsilon reaches the norms") {
    CHECK_FALSE(
        tightness_witness(single, 1.0, TightnessMode::Absolute).has_value());
    CHECK_FALSE(
        tightness_witness(single, 1.5, TightnessMode::Absolute).has_value());
  }
  SUBCASE("witnesses are monotone in epsilon (classical)") {
    const auto tight = tightness_witness(single, 0.2, TightnessMode::Classical);
    REQUIRE(tight.has_value());
    // the same K also satisfies any larger epsilon
    const double v = point_mass(g, a)(*tight);
    for (double eps : {0.3, 0.6, 0.9}) CHECK(v > 1.0 - eps);
  }
  CHECK_THROWS_AS(tightness_witness(single, 0.0, TightnessMode::Absolute),
                  ContractViolation);
}

TEST_CASE("compactness experiment over canonical sequences") {
  GridSpace g(8);
  const PointRef a{g.cell_at(3, 3)}, b{g.cell_at(6, 1)};
  const Region d = Region::compact(g, ball_cells(g, g.cell_at(4, 4), 0.2));

  std::vector<MeasureSequence> seqs;
  seqs.push_back(mixing_sequence(indicator_dtm(d), uniform_radon(g), 48));
  seqs.push_back(alternating_sequence(g, a, b, 48));
  {
    MeasureSequence grow;
    grow.name = "growing-mass";
    grow.limit = point_mass(g, a);
    grow.horizon = 48;
    grow.member = [g, a](int k) {
      return combine({{double(k), point_mass(g, a)}});
    };
    seqs.push_back(std::move(grow));
  }

  const auto reports = prokhorov_experiment(seqs, {});
  REQUIRE(reports.size() == 3);

  CHECK(reports[0].variation_bounded);
  CHECK(reports[0].subsequence_found);
  // the residual decays, so the tail itself clusters
  CHECK(reports[0].subsequence.size() >= 8);

  CHECK(reports[1].variation_bounded);
  CHECK(reports[1].subsequence_found);
  // the found cluster picks every other index
  REQUIRE(reports[1].subsequence.size() >= 2);
  CHECK((reports[1].subsequence[1] - reports[1].subsequence[0]) % 2 == 0);

  CHECK_FALSE(reports[2].variation_bounded);
  CHECK(reports[2].variation_sup > 16.0);
  CHECK_FALSE(reports[2].note.empty());
}
