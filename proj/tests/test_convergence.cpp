#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "topmeas/convergence.hpp"
#include "topmeas/solid.hpp"

using namespace topmeas;

namespace {

MeasureSequence small_mixing(const GridSpace& g, int horizon) {
  const Region d =
      Region::compact(g, ball_cells(g, g.cell_at(g.n / 2, g.n / 4), 0.15));
  return mixing_sequence(indicator_dtm(d), uniform_radon(g), horizon);
}

}  // namespace

TEST_CASE("mu-continuity detection") {
  GridSpace g(4);
  const DtmEvaluator u = uniform_radon(g);
  CellSet d(g.cell_count());
  d.set(g.cell_at(1, 1));
  d.set(g.cell_at(1, 2));
  const Region dreg = Region::compact(g, d);
  const DtmEvaluator nu = indicator_dtm(dreg);

  CHECK(mu_continuity(u, dreg));  // cell boundaries carry no weight
  CHECK(mu_continuity(u, Region::empty(g, Kind::Open)));
  CHECK_FALSE(mu_continuity(nu, dreg));  // closure 1, interior 0
  CHECK(mu_continuity(nu, Region::whole(g, Kind::Compact)));
}

TEST_CASE("constant sequences converge immediately") {
  GridSpace g(8);
  const MeasureSequence s = constant_sequence(uniform_radon(g), 32);
  const TestConfig cfg = default_panels(g, 1e-3, 0);
  const CrosscheckReport rep = crosscheck(s, cfg);
  for (const auto& c : rep.conditions) {
    CHECK(c.verdict == Verdict::Converged);
    CHECK(c.n_achieving == 0);
  }
  CHECK_FALSE(rep.anomaly);
  CHECK(rep.compact_variant.total_mass.verdict == Verdict::Converged);
}

TEST_CASE("short horizons are inconclusive") {
  GridSpace g(8);
  const MeasureSequence s = constant_sequence(uniform_radon(g), 1);
  const CrosscheckReport rep = crosscheck(s, default_panels(g, 1e-3, 0));
  for (const auto& c : rep.conditions)
    CHECK(c.verdict == Verdict::Inconclusive);
  CHECK_FALSE(rep.anomaly);
}

TEST_CASE("mixing sequence converges under every condition") {
  GridSpace g(16);
  const MeasureSequence s = small_mixing(g, 128);
  const TestConfig cfg = default_panels(g, 0.05, 0);
  const CrosscheckReport rep = crosscheck(s, cfg);
  for (const auto& c : rep.conditions) {
    INFO(c.condition, " ", c.witness);
    CHECK(c.verdict == Verdict::Converged);
  }
  CHECK_FALSE(rep.anomaly);
  CHECK(rep.compact_variant.cross_verdict_consistent);

  // the integral residual is exactly the scaled base gap
  const DtmEvaluator nu = s.member(1);  // k = 1 gives the pure indicator part
  for (int k : {2, 8, 32, 128}) {
    const DtmEvaluator mk = s.member(k);
    for (const auto& f : cfg.function_panel) {
      const double actual =
          std::abs(quasi_integral(mk, f) - quasi_integral(s.limit, f));
      const double base =
          std::abs(quasi_integral(nu, f) - quasi_integral(s.limit, f));
      CHECK(actual == doctest::Approx(base / k).epsilon(1e-9));
    }
  }
}

TEST_CASE("shrinking indicator converges to the point mass") {
  GridSpace g(16);
  const PointRef a{g.cell_at(8, 8)};
  const MeasureSequence s = shrinking_indicator_sequence(g, a, 0.25, 96);
  const TestConfig cfg = panels_around_point(g, a, 0.12, 0);
  const CrosscheckReport rep = crosscheck(s, cfg);
  for (const auto& c : rep.conditions) {
    INFO(c.condition, " ", c.witness);
    CHECK(c.verdict == Verdict::Converged);
  }
  CHECK_FALSE(rep.anomaly);

  // one-sided set convergence: an open neighborhood of a settles at 1
  const Region u = cfg.open_panel.front();
  CHECK(s.member(96)(u) == 1.0);
  CHECK(s.limit(u) == 1.0);

  // Lipschitz shrinkage bound for a cone of slope 1
  const GridFunction peak = peak_cone(g, a, 1.0, 1.0);
  const double h = g.cell_width();
  for (int k : {1, 4, 16, 96}) {
    const double rk = 0.25 / k;
    const double dev = std::abs(quasi_integral(s.member(k), peak) - 1.0);
    CHECK(dev <= rk + h * 1.4142135623730951 + 1e-12);
  }
}

TEST_CASE("alternating point masses violate every condition, no anomaly") {
  GridSpace g(16);
  const PointRef a{g.cell_at(8, 8)}, b{g.cell_at(2, 13)};
  const MeasureSequence s = alternating_sequence(g, a, b, 64);
  const CrosscheckReport rep = crosscheck(s, panels_around_point(g, a, 0.05, 0));
  for (const auto& c : rep.conditions) {
    INFO(c.condition);
    CHECK(c.verdict == Verdict::Violated);
    CHECK_FALSE(c.witness.empty());
    CHECK(c.worst_margin > 0.0);
  }
  CHECK_FALSE(rep.anomaly);
}

TEST_CASE("converged verdicts are monotone in epsilon") {
  GridSpace g(16);
  const MeasureSequence s = small_mixing(g, 64);
  TestConfig cfg = default_panels(g, 0.05, 0);
  const CrosscheckReport at_needed = crosscheck(s, cfg);
  cfg.epsilon = 0.5;  // enlarging epsilon never flips converged to violated
  const CrosscheckReport at_loose = crosscheck(s, cfg);
  for (size_t i = 0; i < at_needed.conditions.size(); ++i)
    if (at_needed.conditions[i].verdict == Verdict::Converged)
      CHECK(at_loose.conditions[i].verdict == Verdict::Converged);
}

TEST_CASE("sequence members satisfy the sampled axiom battery") {
  GridSpace g(8);
  const MeasureSequence s = small_mixing(g, 16);
  for (int k : {1, 4, 16})
    CHECK(all_pass(verify_dtm_axioms(s.member(k), Budget::sampled(150, 5))));
  const MeasureSequence sh =
      shrinking_indicator_sequence(g, {g.cell_at(4, 4)}, 0.3, 16);
  for (int k : {1, 4, 16})
    CHECK(all_pass(verify_dtm_axioms(sh.member(k), Budget::sampled(150, 5))));
}

TEST_CASE("residual decay of the mixing sequence is harmonic") {
  GridSpace g(16);
  const MeasureSequence s = small_mixing(g, 128);
  const TestConfig cfg = default_panels(g, 0.05, 0);
  const ConditionReport rep = check_cond_integrals(s, cfg);
  REQUIRE(static_cast<int>(rep.residuals.size()) == 128);
  // residuals store (worst residual - epsilon); undo the shift
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = 8; k <= 128; ++k) {
    const double r = rep.residuals[k - 1] + cfg.epsilon;
    if (r <= 0) continue;
    const double lx = std::log(double(k)), ly = std::log(r);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  REQUIRE(n > 20);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.3));
}
