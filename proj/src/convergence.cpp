#include "topmeas/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "topmeas/solid.hpp"

namespace topmeas {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Violated: return "violated";
    default: return "inconclusive";
  }
}

bool mu_continuity(const DtmEvaluator& m, const Region& r) {
  return std::abs(m(closure(r)) - m(interior(r))) <= 1e-12;
}

namespace {

int tail_start(const MeasureSequence& s, const TestConfig& cfg) {
  const int tail_len = static_cast<int>(
      std::ceil(cfg.tail_fraction * static_cast<double>(s.horizon)));
  return std::max(1, s.horizon - tail_len + 1);
}

// Residual-driven verdict: residuals[k-1] is the worst breach at index k
// (<= 0 means the condition holds there). Converged iff the whole tail holds.
ConditionReport finish(const MeasureSequence& s, const TestConfig& cfg,
                       std::string condition, std::vector<double> residuals,
                       std::vector<std::string> witnesses) {
  ConditionReport rep;
  rep.condition = std::move(condition);
  rep.epsilon = cfg.epsilon;
  rep.residuals = std::move(residuals);
  if (s.horizon < cfg.min_horizon) {
    rep.verdict = Verdict::Inconclusive;
    return rep;
  }
  const int start = tail_start(s, cfg);
  double worst = 0.0;
  int worst_k = -1;
  for (int k = start; k <= s.horizon; ++k) {
    if (rep.residuals[k - 1] > worst) {
      worst = rep.residuals[k - 1];
      worst_k = k;
    }
  }
  rep.worst_margin = worst;
  if (worst_k >= 0) {
    rep.verdict = Verdict::Violated;
    rep.witness = witnesses[worst_k - 1] + " at index " + std::to_string(worst_k);
  } else {
    rep.verdict = Verdict::Converged;
    int n0 = 0;
    for (int k = s.horizon; k >= 1; --k) {
      if (rep.residuals[k - 1] > 0.0) {
        n0 = k;
        break;
      }
    }
    rep.n_achieving = n0;
  }
  return rep;
}

}  // namespace

ConditionReport check_cond_integrals(const MeasureSequence& s,
                                     const TestConfig& cfg) {
  std::vector<double> limit_vals;
  limit_vals.reserve(cfg.function_panel.size());
  for (const auto& f : cfg.function_panel)
    limit_vals.push_back(quasi_integral(s.limit, f));

  std::vector<double> residuals(s.horizon, 0.0);
  std::vector<std::string> witnesses(s.horizon);
  for (int k = 1; k <= s.horizon; ++k) {
    const DtmEvaluator mk = s.member(k);
    double worst = -1.0;
    size_t worst_f = 0;
    for (size_t i = 0; i < cfg.function_panel.size(); ++i) {
      const double r =
          std::abs(quasi_integral(mk, cfg.function_panel[i]) - limit_vals[i]);
      if (r > worst) {
        worst = r;
        worst_f = i;
      }
    }
    residuals[k - 1] = worst - cfg.epsilon;
    witnesses[k - 1] = "f[" + std::to_string(worst_f) + "]";
  }
  return finish(s, cfg, "integrals", std::move(residuals), std::move(witnesses));
}

ConditionReport check_cond_sets(const MeasureSequence& s,
                                const TestConfig& cfg) {
  std::vector<double> open_limit, compact_limit;
  for (const auto& u : cfg.open_panel) open_limit.push_back(s.limit(u));
  for (const auto& c : cfg.compact_panel) compact_limit.push_back(s.limit(c));

  std::vector<double> residuals(s.horizon, 0.0);
  std::vector<std::string> witnesses(s.horizon);
  for (int k = 1; k <= s.horizon; ++k) {
    const DtmEvaluator mk = s.member(k);
    double worst = -1.0;
    std::string who;
    for (size_t i = 0; i < cfg.open_panel.size(); ++i) {
      const double breach = open_limit[i] - mk(cfg.open_panel[i]) - cfg.epsilon;
      if (breach > worst) {
        worst = breach;
        who = "U[" + std::to_string(i) + "]";
      }
    }
    for (size_t i = 0; i < cfg.compact_panel.size(); ++i) {
      const double breach =
          mk(cfg.compact_panel[i]) - compact_limit[i] - cfg.epsilon;
      if (breach > worst) {
        worst = breach;
        who = "K[" + std::to_string(i) + "]";
      }
    }
    residuals[k - 1] = worst;
    witnesses[k - 1] = who;
  }
  return finish(s, cfg, "sets", std::move(residuals), std::move(witnesses));
}

ConditionReport check_cond_continuity_sets(const MeasureSequence& s,
                                           const TestConfig& cfg) {
  std::vector<Region> panel;
  for (const auto& u : cfg.open_panel)
    if (mu_continuity(s.limit, u)) panel.push_back(u);
  for (const auto& c : cfg.compact_panel)
    if (mu_continuity(s.limit, c)) panel.push_back(c);
  std::vector<double> limits;
  for (const auto& a : panel) limits.push_back(s.limit(a));

  std::vector<double> residuals(s.horizon, 0.0);
  std::vector<std::string> witnesses(s.horizon);
  for (int k = 1; k <= s.horizon; ++k) {
    const DtmEvaluator mk = s.member(k);
    double worst = -1.0;
    size_t worst_i = 0;
    for (size_t i = 0; i < panel.size(); ++i) {
      const double r = std::abs(mk(panel[i]) - limits[i]);
      if (r > worst) {
        worst = r;
        worst_i = i;
      }
    }
    residuals[k - 1] = worst - cfg.epsilon;
    witnesses[k - 1] = "A[" + std::to_string(worst_i) + "]";
  }
  return finish(s, cfg, "continuity-sets", std::move(residuals),
                std::move(witnesses));
}

ConditionReport check_cond_r2(const MeasureSequence& s, const TestConfig& cfg) {
  // Evaluation points: midpoints between consecutive jumps of the limit's R2,
  // plus guarded points below the first and above the last jump. All are
  // continuity points of the limit's R2.
  struct EvalSet {
    std::vector<double> points;
  };
  std::vector<EvalSet> eval_sets(cfg.function_panel.size());
  std::vector<StepFunction> limit_r2s, limit_r1s;
  for (size_t i = 0; i < cfg.function_panel.size(); ++i) {
    const auto& f = cfg.function_panel[i];
    StepFunction lr2 = r2(s.limit, f);
    StepFunction lr1 = r1(s.limit, f);
    const auto jumps = lr2.discontinuities();
    auto& pts = eval_sets[i].points;
    if (!jumps.empty()) {
      double gap = 0.5;
      for (size_t j = 1; j < jumps.size(); ++j)
        gap = std::min(gap, (jumps[j] - jumps[j - 1]) / 2.0);
      pts.push_back(jumps.front() - gap);
      for (size_t j = 1; j < jumps.size(); ++j)
        pts.push_back((jumps[j - 1] + jumps[j]) / 2.0);
      pts.push_back(jumps.back() + gap);
    }
    limit_r2s.push_back(std::move(lr2));
    limit_r1s.push_back(std::move(lr1));
  }

  std::vector<double> residuals(s.horizon, 0.0);
  std::vector<std::string> witnesses(s.horizon);
  for (int k = 1; k <= s.horizon; ++k) {
    const DtmEvaluator mk = s.member(k);
    double worst = -1.0;
    std::string who;
    for (size_t i = 0; i < cfg.function_panel.size(); ++i) {
      if (eval_sets[i].points.empty()) continue;
      const StepFunction k_r2 = r2(mk, cfg.function_panel[i]);
      const StepFunction k_r1 = r1(mk, cfg.function_panel[i]);
      for (double t : eval_sets[i].points) {
        const double d2 =
            std::abs(k_r2.value_at(t) - limit_r2s[i].value_at(t));
        const double d1 =
            std::abs(k_r1.value_at(t) - limit_r1s[i].value_at(t));
        const double r = std::max(d1, d2);
        if (r > worst) {
          worst = r;
          who = "f[" + std::to_string(i) + "], t=" + std::to_string(t);
        }
      }
    }
    residuals[k - 1] = (worst < 0 ? 0.0 : worst) - cfg.epsilon;
    witnesses[k - 1] = who;
  }
  return finish(s, cfg, "distribution-functions", std::move(residuals),
                std::move(witnesses));
}

CompactVariantReport compact_space_variant(const MeasureSequence& s,
                                           const TestConfig& cfg) {
  CompactVariantReport rep;
  const GridSpace g = s.limit.grid();
  const double limit_mass = norm_of(s.limit);

  {
    std::vector<double> residuals(s.horizon, 0.0);
    std::vector<std::string> witnesses(s.horizon, "X");
    for (int k = 1; k <= s.horizon; ++k)
      residuals[k - 1] =
          std::abs(norm_of(s.member(k)) - limit_mass) - cfg.epsilon;
    rep.total_mass =
        finish(s, cfg, "total-mass", std::move(residuals), std::move(witnesses));
  }
  {
    // on the compact carrier, closed sets are the compact regions
    std::vector<double> limits;
    for (const auto& c : cfg.compact_panel) limits.push_back(s.limit(c));
    std::vector<double> residuals(s.horizon, 0.0);
    std::vector<std::string> witnesses(s.horizon);
    for (int k = 1; k <= s.horizon; ++k) {
      const DtmEvaluator mk = s.member(k);
      double worst = -1.0;
      std::string who;
      for (size_t i = 0; i < cfg.compact_panel.size(); ++i) {
        const double breach =
            mk(cfg.compact_panel[i]) - limits[i] - cfg.epsilon;
        if (breach > worst) {
          worst = breach;
          who = "D[" + std::to_string(i) + "]";
        }
      }
      residuals[k - 1] = worst;
      witnesses[k - 1] = who;
    }
    rep.closed_limsup = finish(s, cfg, "closed-limsup", std::move(residuals),
                               std::move(witnesses));
  }
  {
    std::vector<double> limits;
    for (const auto& u : cfg.open_panel) limits.push_back(s.limit(u));
    std::vector<double> residuals(s.horizon, 0.0);
    std::vector<std::string> witnesses(s.horizon);
    for (int k = 1; k <= s.horizon; ++k) {
      const DtmEvaluator mk = s.member(k);
      double worst = -1.0;
      std::string who;
      for (size_t i = 0; i < cfg.open_panel.size(); ++i) {
        const double breach = limits[i] - mk(cfg.open_panel[i]) - cfg.epsilon;
        if (breach > worst) {
          worst = breach;
          who = "U[" + std::to_string(i) + "]";
        }
      }
      residuals[k - 1] = worst;
      witnesses[k - 1] = who;
    }
    rep.open_liminf = finish(s, cfg, "open-liminf", std::move(residuals),
                             std::move(witnesses));
  }
  (void)g;
  rep.cross_verdict_consistent =
      !((rep.closed_limsup.verdict == Verdict::Converged &&
         rep.total_mass.verdict == Verdict::Converged &&
         rep.open_liminf.verdict == Verdict::Violated) ||
        (rep.open_liminf.verdict == Verdict::Converged &&
         rep.total_mass.verdict == Verdict::Converged &&
         rep.closed_limsup.verdict == Verdict::Violated));
  return rep;
}

CrosscheckReport crosscheck(const MeasureSequence& s, const TestConfig& cfg) {
  CrosscheckReport rep;
  rep.conditions.push_back(check_cond_integrals(s, cfg));
  rep.conditions.push_back(check_cond_sets(s, cfg));
  rep.conditions.push_back(check_cond_continuity_sets(s, cfg));
  rep.conditions.push_back(check_cond_r2(s, cfg));
  rep.compact_variant = compact_space_variant(s, cfg);
  bool some_converged = false, some_violated = false;
  for (const auto& c : rep.conditions) {
    some_converged |= c.verdict == Verdict::Converged;
    some_violated |= c.verdict == Verdict::Violated;
  }
  rep.anomaly = some_converged && some_violated;
  return rep;
}

// --- canonical sequences ----------------------------------------------------

MeasureSequence mixing_sequence(const DtmEvaluator& nu_hat,
                                const DtmEvaluator& m, int horizon) {
  const double nu_total = norm_of(nu_hat);
  if (nu_total <= 0.0)
    throw ContractViolation("mixing_sequence: nu must have positive mass");
  MeasureSequence s;
  s.name = "mixing";
  s.limit = m;
  s.horizon = horizon;
  s.member = [nu_hat, m, nu_total](int k) {
    const double a = 1.0 / static_cast<double>(k);
    return combine({{a / nu_total, nu_hat}, {1.0 - a, m}});
  };
  return s;
}

MeasureSequence shrinking_indicator_sequence(GridSpace g, PointRef a,
                                             double initial_radius,
                                             int horizon) {
  MeasureSequence s;
  s.name = "shrinking-indicator";
  s.limit = point_mass(g, a);
  s.horizon = horizon;
  s.member = [g, a, initial_radius](int k) {
    const double r = initial_radius / static_cast<double>(k);
    CellSet cells = ball_cells(g, a.cell, r);
    if (cells.none()) cells.set(a.cell);
    return indicator_dtm(Region::compact(g, cells));
  };
  return s;
}

MeasureSequence alternating_sequence(GridSpace g, PointRef a, PointRef b,
                                     int horizon) {
  MeasureSequence s;
  s.name = "alternating";
  s.limit = point_mass(g, a);
  s.horizon = horizon;
  s.member = [g, a, b](int k) {
    return point_mass(g, (k % 2 == 1) ? a : b);
  };
  return s;
}

MeasureSequence constant_sequence(const DtmEvaluator& m, int horizon) {
  MeasureSequence s;
  s.name = "constant";
  s.limit = m;
  s.horizon = horizon;
  s.member = [m](int) { return m; };
  return s;
}

// --- panels -------------------------------------------------------------

TestConfig panels_around_point(GridSpace g, PointRef a, double epsilon,
                               uint64_t seed) {
  TestConfig cfg;
  cfg.epsilon = epsilon;
  const double h = g.cell_width();
  const auto whole = CellSet::full(g.cell_count());

  // opens: dilations of the 8-neighborhood of a (never rim-touching at a),
  // the whole space, and an open far away from a
  CellSet base(g.cell_count());
  base.set(a.cell);
  CellSet nbhd = closure8(g, base);
  for (int j = 0; j < 4; ++j) {
    cfg.open_panel.push_back(Region::open(g, nbhd));
    nbhd = closure8(g, nbhd);
  }
  cfg.open_panel.push_back(Region::open(g, whole));
  const int far_cell = g.cell_at(g.n - 1, g.n - 1) == a.cell
                           ? g.cell_at(0, 0)
                           : g.cell_at(g.n - 1, g.n - 1);
  cfg.open_panel.push_back(Region::open(g, ball_cells(g, far_cell, 2.5 * h)));

  // compacts: balls around a, a far ball, the whole space
  for (double r : {1.5 * h, 3.5 * h, 0.25}) {
    CellSet ball = ball_cells(g, a.cell, r);
    ball.set(a.cell);
    cfg.compact_panel.push_back(Region::compact(g, ball));
  }
  cfg.compact_panel.push_back(Region::compact(g, ball_cells(g, far_cell, 2.5 * h)));
  cfg.compact_panel.push_back(Region::compact(g, whole));

  // functions: cups and plateaus anchored at a (their minimum over any
  // neighborhood of a is attained at a), a gentle peak cone, constants
  cfg.function_panel.push_back(cup(g, a, 0.0, 1.0));
  cfg.function_panel.push_back(cup(g, a, 0.25, 0.5));
  cfg.function_panel.push_back(plateau(g, ball_cells(g, a.cell, 0.2), 1.0));
  cfg.function_panel.push_back(peak_cone(g, a, 1.0, 1.0));
  cfg.function_panel.push_back(constant_function(g, 0.6));
  (void)seed;
  return cfg;
}

TestConfig default_panels(GridSpace g, double epsilon, uint64_t seed) {
  TestConfig cfg;
  cfg.epsilon = epsilon;
  std::mt19937_64 rng(seed);
  const int n = g.n;

  auto band = [&](int r0, int r1) {
    CellSet s(g.cell_count());
    for (int r = r0; r <= r1 && r < n; ++r)
      for (int c = 0; c < n; ++c) s.set(g.cell_at(r, c));
    return s;
  };
  cfg.open_panel = {Region::open(g, CellSet::full(g.cell_count())),
                    Region::open(g, band(0, n / 2)),
                    Region::open(g, ball_cells(g, g.cell_at(n / 2, n / 2), 0.3))};
  cfg.compact_panel = {Region::compact(g, CellSet::full(g.cell_count())),
                       Region::compact(g, band(n / 3, 2 * n / 3)),
                       Region::compact(g, ball_cells(g, g.cell_at(n / 3, n / 3), 0.22))};
  std::uniform_int_distribution<int> cell(0, g.cell_count() - 1);
  for (int i = 0; i < 3; ++i) {
    cfg.open_panel.push_back(Region::open(g, ball_cells(g, cell(rng), 0.15)));
    cfg.compact_panel.push_back(Region::compact(g, ball_cells(g, cell(rng), 0.18)));
  }

  cfg.function_panel = {constant_function(g, 1.0),
                        distance_cone(g, {g.cell_at(n / 2, n / 2)}),
                        peak_cone(g, {g.cell_at(n / 4, n / 4)}, 1.0, 1.5),
                        cup(g, {g.cell_at(2 * n / 3, n / 3)}, 0.1, 0.8)};
  for (int i = 0; i < 2; ++i)
    cfg.function_panel.push_back(random_piecewise(g, rng, 4, 0.0, 1.0));
  return cfg;
}

}  // namespace topmeas
