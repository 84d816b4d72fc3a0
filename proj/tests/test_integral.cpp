#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "topmeas/integral.hpp"
#include "topmeas/solid.hpp"

using namespace topmeas;

namespace {

// independent reference for the distribution integral of nonnegative f:
// segment-sum of the step function over [0, max f]
double segment_sum_r1(const DtmEvaluator& m, const GridFunction& f) {
  std::vector<double> values = f.values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  double total = 0.0, prev = 0.0;
  for (double v : values) {
    // on [prev, v): cells with f > t are exactly those with f >= v
    total += (v - prev) * m(Region::open(f.grid, f.cells_above(v, false)));
    prev = v;
  }
  return total;
}

double weighted_sum(const std::vector<double>& w, const GridFunction& f) {
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * f.values[i];
  return s;
}

}  // namespace

TEST_CASE("step function evaluation respects the continuity side") {
  StepFunction s;
  s.breakpoints = {1.0, 2.0};
  s.plateaus = {5.0, 3.0, 0.0};
  s.left_continuous = false;  // value on [b_i, b_{i+1})
  CHECK(s.value_at(0.5) == 5.0);
  CHECK(s.value_at(1.0) == 3.0);
  CHECK(s.value_at(1.5) == 3.0);
  CHECK(s.value_at(2.0) == 0.0);
  s.left_continuous = true;  // value on (b_{i-1}, b_i]
  CHECK(s.value_at(1.0) == 5.0);
  CHECK(s.value_at(1.5) == 3.0);
  CHECK(s.value_at(2.0) == 3.0);
  CHECK(s.value_at(2.5) == 0.0);

  CHECK(s.discontinuities().size() == 2);
  StepFunction flat{{1.0}, {2.0, 2.0}, false};
  CHECK(flat.discontinuities().empty());
}

TEST_CASE("point-mass integral is the point value, exactly") {
  GridSpace g(8);
  const PointRef a{g.cell_at(3, 5)};
  const DtmEvaluator m = point_mass(g, a);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 50; ++it) {
    const GridFunction f = random_function(g, rng, 0.0, 3.0);
    const IntegralResult res = integrate(m, f);
    CHECK(res.value == f.at(a.cell));  // exact, including bits
    CHECK(res.r2_equal);
  }
  // R1 of a point mass: 1 before f(a), 0 after
  const GridFunction f = random_function(g, rng, 0.0, 1.0);
  const StepFunction s1 = r1(m, f);
  CHECK(s1.value_at(f.at(a.cell) - 1e-9) == 1.0);
  CHECK(s1.value_at(f.at(a.cell)) == 0.0);
  const StepFunction s2 = r2(m, f);
  CHECK(s2.value_at(f.at(a.cell)) == 1.0);
  CHECK(s2.value_at(f.at(a.cell) + 1e-9) == 0.0);
}

TEST_CASE("constant functions integrate to total mass times the constant") {
  GridSpace g(5);
  const DtmEvaluator u = uniform_radon(g);
  const GridFunction c = constant_function(g, 0.7);
  CHECK(integrate(u, c).value == doctest::Approx(0.7));
  const StepFunction s1 = r1(u, c);
  CHECK(s1.value_at(0.3) == doctest::Approx(1.0));
  CHECK(s1.value_at(0.7) == 0.0);
  CHECK(s1.value_at(0.8) == 0.0);
}

TEST_CASE("radon integrals agree with the weighted-sum oracle") {
  GridSpace g(6);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> wd(0.0, 2.0);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> w(g.cell_count());
    for (auto& x : w) x = wd(rng);
    const DtmEvaluator m = radon_from_weights(g, w);
    const GridFunction f = random_function(g, rng, 0.0, 5.0);
    const IntegralResult res = integrate(m, f);
    CHECK(res.value == doctest::Approx(weighted_sum(w, f)).epsilon(1e-12));
    CHECK(res.r2_gap <= 1e-12);
    CHECK(res.value == doctest::Approx(segment_sum_r1(m, f)).epsilon(1e-12));
  }
}

TEST_CASE("indicator integral is the neighborhood-adjusted minimum") {
  GridSpace g(6);
  CellSet d(g.cell_count());
  d.set(g.cell_at(2, 2));
  d.set(g.cell_at(2, 3));
  d.set(g.cell_at(3, 3));
  const DtmEvaluator nu = indicator_dtm(Region::compact(g, d));
  const CellSet hood = closure8(g, d);

  std::mt19937_64 rng(17);
  for (int it = 0; it < 60; ++it) {
    const GridFunction f = random_function(g, rng, 0.0, 1.0);
    double min_hood = 1e18;
    hood.for_each([&](int c) { min_hood = std::min(min_hood, f.at(c)); });
    const IntegralResult res = integrate(nu, f);
    CHECK(res.value == min_hood);  // exact by telescoping
    CHECK(res.value == doctest::Approx(segment_sum_r1(nu, f)).epsilon(1e-12));

    // the R2 route gives the plain minimum over the carrier
    double min_d = 1e18;
    d.for_each([&](int c) { min_d = std::min(min_d, f.at(c)); });
    CHECK(res.r2_value == min_d);
  }

  // documented behaviour: the indicator of the carrier's own plateau has an
  // R1/R2 gap of one (the carrier cell set is not a continuity set)
  const GridFunction plat = plateau(g, d, 1.0);
  const IntegralResult res = integrate(nu, plat);
  CHECK(res.value == 0.0);
  CHECK(res.r2_value == 1.0);
  CHECK_FALSE(res.r2_equal);
  CHECK_THROWS_WITH_AS(integrate_strict(nu, plat), "distribution inconsistency",
                       std::runtime_error);

  // cups anchored inside the carrier keep the two routes identical: their
  // minimum over any neighborhood of the carrier sits at the anchor
  const GridFunction anchored = cup(g, {g.cell_at(2, 2)}, 0.3, 1.0);
  CHECK(integrate(nu, anchored).r2_equal);
  CHECK(integrate(nu, anchored).value == doctest::Approx(0.3));
  // a plateau that covers the carrier's whole neighborhood also agrees
  const GridFunction wide = plateau(g, closure8(g, hood), 1.0);
  CHECK(integrate(nu, wide).r2_equal);
}

TEST_CASE("r1 and r2 are ordered, monotone, and equal between breakpoints for measures") {
  GridSpace g(5);
  std::mt19937_64 rng(23);
  std::vector<DtmEvaluator> pool{uniform_radon(g),
                                 point_mass(g, {g.cell_at(2, 2)})};
  CellSet d(g.cell_count());
  d.set(g.cell_at(1, 1));
  d.set(g.cell_at(1, 2));
  pool.push_back(indicator_dtm(Region::compact(g, d)));

  for (int it = 0; it < 40; ++it) {
    const GridFunction f = random_function(g, rng, 0.0, 2.0);
    for (const auto& m : pool) {
      const StepFunction s1 = r1(m, f);
      const StepFunction s2 = r2(m, f);
      for (size_t i = 0; i + 1 < s1.plateaus.size(); ++i) {
        CHECK(s1.plateaus[i] >= s1.plateaus[i + 1] - 1e-12);  // non-increasing
        CHECK(s2.plateaus[i] >= s2.plateaus[i + 1] - 1e-12);
      }
      for (size_t i = 0; i < s1.plateaus.size(); ++i)
        CHECK(s2.plateaus[i] >= s1.plateaus[i] - 1e-12);  // R2 >= R1
    }
    // measure-class evaluators: R1 = R2 at midpoints between breakpoints
    for (const auto& m : {pool[0], pool[1]}) {
      const StepFunction s1 = r1(m, f);
      const StepFunction s2 = r2(m, f);
      for (size_t i = 0; i + 1 < s1.breakpoints.size(); ++i) {
        const double mid = (s1.breakpoints[i] + s1.breakpoints[i + 1]) / 2;
        CHECK(s1.value_at(mid) == doctest::Approx(s2.value_at(mid)));
      }
    }
  }
}

TEST_CASE("mixing identity: distribution functions combine linearly") {
  GridSpace g(6);
  CellSet d(g.cell_count());
  for (int r = 2; r <= 3; ++r)
    for (int c = 2; c <= 3; ++c) d.set(g.cell_at(r, c));
  const DtmEvaluator nu = indicator_dtm(Region::compact(g, d));
  const DtmEvaluator m = uniform_radon(g);
  const double alpha = 0.25, beta = 0.75;
  const DtmEvaluator mix = combine({{alpha, nu}, {beta, m}});

  std::mt19937_64 rng(7);
  for (int it = 0; it < 30; ++it) {
    const GridFunction f = random_function(g, rng, 0.0, 1.0);
    const StepFunction smix = r1(mix, f);
    const StepFunction snu = r1(nu, f);
    const StepFunction sm = r1(m, f);
    for (size_t i = 0; i < smix.plateaus.size(); ++i)
      CHECK(smix.plateaus[i] ==
            doctest::Approx(alpha * snu.plateaus[i] + beta * sm.plateaus[i]));
    CHECK(integrate(mix, f).value ==
          doctest::Approx(alpha * integrate(nu, f).value +
                          beta * integrate(m, f).value)
              .epsilon(1e-12));
  }
}

TEST_CASE("integrals are invariant under grid symmetries") {
  GridSpace g(5);
  std::mt19937_64 rng(41);
  auto transpose_cell = [&](int c) { return g.cell_at(g.col_of(c), g.row_of(c)); };
  for (int it = 0; it < 20; ++it) {
    std::vector<double> w(g.cell_count());
    std::uniform_real_distribution<double> wd(0.0, 1.0);
    for (auto& x : w) x = wd(rng);
    const GridFunction f = random_function(g, rng, 0.0, 1.0);

    std::vector<double> wt(g.cell_count());
    std::vector<double> ft(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c) {
      wt[transpose_cell(c)] = w[c];
      ft[transpose_cell(c)] = f.values[c];
    }
    CHECK(integrate(radon_from_weights(g, w), f).value ==
          doctest::Approx(
              integrate(radon_from_weights(g, wt), GridFunction(g, ft)).value));
  }
}

TEST_CASE("d-functional suite passes on builtin evaluators") {
  GridSpace g(5);
  CellSet d(g.cell_count());
  d.set(g.cell_at(2, 2));
  d.set(g.cell_at(2, 3));

  std::mt19937_64 rng(13);
  std::vector<GridFunction> panel;
  panel.push_back(constant_function(g, 0.5));
  panel.push_back(peak_cone(g, {g.cell_at(1, 1)}, 1.0, 1.0));
  panel.push_back(cup(g, {g.cell_at(3, 3)}, 0.1, 0.5));
  for (int i = 0; i < 3; ++i) panel.push_back(random_function(g, rng, 0.0, 1.0));
  // a pointwise-dominating pair and an 8-separated pair
  panel.push_back(panel[1].plus(constant_function(g, 0.2)));
  {
    CellSet left(g.cell_count()), right(g.cell_count());
    left.set(g.cell_at(0, 0));
    left.set(g.cell_at(0, 1));
    right.set(g.cell_at(4, 3));
    right.set(g.cell_at(4, 4));
    panel.push_back(plateau(g, left, 0.8));
    panel.push_back(plateau(g, right, 0.6));
  }

  CHECK(dfunctional_suite(uniform_radon(g), panel, true).all_pass());
  CHECK(dfunctional_suite(point_mass(g, {g.cell_at(2, 1)}), panel, true)
            .all_pass());
  CHECK(dfunctional_suite(indicator_dtm(Region::compact(g, d)), panel, false)
            .all_pass());

  // orthogonal additivity holds for the extension as well, even though full
  // additivity fails
  const DtmEvaluator ext = extend(
      nvssf(g, {{g.cell_at(0, 0)}, {g.cell_at(2, 2)}, {g.cell_at(4, 4)}}, 1));
  CHECK(dfunctional_suite(ext, panel, true).all_pass());
}

TEST_CASE("functional-to-measure round trip") {
  GridSpace g(5);
  const PointRef a{g.cell_at(2, 2)};

  {
    CellSet k(g.cell_count());
    k.set(a.cell);
    const auto rep = roundtrip_check(point_mass(g, a), Region::compact(g, k));
    CHECK(rep.lower_bound_holds);
    CHECK(rep.exact);
    CHECK(rep.infimum == doctest::Approx(1.0));
  }
  {
    CellSet half(g.cell_count());
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < g.n; ++c) half.set(g.cell_at(r, c));
    const auto rep =
        roundtrip_check(uniform_radon(g), Region::compact(g, half));
    CHECK(rep.lower_bound_holds);
    // the gap is at most the mass of one dilation ring
    CHECK(rep.gap <= doctest::Approx(double(g.n) / g.cell_count() + 1e-12));
  }
  {
    const auto rep =
        roundtrip_check(uniform_radon(g), Region::whole(g, Kind::Compact));
    CHECK(rep.exact);
    CHECK(rep.infimum == doctest::Approx(1.0));
  }
}
