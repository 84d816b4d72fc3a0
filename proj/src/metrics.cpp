#include "topmeas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "topmeas/solid.hpp"

namespace topmeas {

SetFamily SetFamily::exhaustive(GridSpace g) {
  if (g.cell_count() > 16)
    throw ContractViolation("exhaustive families are legal only for n <= 4");
  SetFamily f;
  f.mode = Mode::Exhaustive;
  f.grid = g;
  return f;
}

SetFamily SetFamily::structured(GridSpace g, int center_stride) {
  SetFamily f;
  f.mode = Mode::Structured;
  f.grid = g;
  const int n = g.n;
  const double h = g.cell_width();
  const int stride = std::max(1, center_stride);

  for (int r = 0; r < n; r += stride)
    for (int c = 0; c < n; c += stride) {
      const int cell = g.cell_at(r, c);
      CellSet single(g.cell_count());
      single.set(cell);
      f.regions.push_back(Region::compact(g, single));
      f.regions.push_back(Region::open(g, single));
      for (double radius : {2.5 * h, 0.1, 0.25}) {
        const CellSet b = ball_cells(g, cell, radius);
        f.regions.push_back(Region::compact(g, b));
        f.regions.push_back(Region::open(g, b));
      }
    }
  auto half = [&](bool rows, int split, bool first) {
    CellSet s(g.cell_count());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const int coord = rows ? r : c;
        if (first ? coord <= split : coord > split) s.set(g.cell_at(r, c));
      }
    return s;
  };
  for (int split = 0; split < n; split += stride)
    for (bool rows : {true, false})
      for (bool first : {true, false}) {
        const CellSet s = half(rows, split, first);
        f.regions.push_back(Region::compact(g, s));
        f.regions.push_back(Region::open(g, s));
      }
  f.regions.push_back(Region::whole(g, Kind::Compact));
  f.regions.push_back(Region::whole(g, Kind::Open));
  return f;
}

SetFamily SetFamily::generated(GridSpace g, int count, uint64_t seed) {
  SetFamily f;
  f.mode = Mode::Generated;
  f.grid = g;
  f.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dens(0.05, 0.95);
  std::bernoulli_distribution kind(0.5);
  for (int i = 0; i < count; ++i) {
    CellSet s(g.cell_count());
    std::bernoulli_distribution bit(dens(rng));
    for (int c = 0; c < g.cell_count(); ++c)
      if (bit(rng)) s.set(c);
    f.regions.push_back(Region(g, kind(rng) ? Kind::Compact : Kind::Open, s));
  }
  return f;
}

void LipFamily::add(GridFunction f) {
  if (f.sup_norm() > 1.0 + 1e-12)
    throw ContractViolation("LipFamily: sup norm exceeds 1");
  if (!f.is_lipschitz1())
    throw ContractViolation("LipFamily: function is not 1-Lipschitz");
  fs_.push_back(std::move(f));
}

void LipFamily::add_clamped_distance(GridSpace g, PointRef q, double shift) {
  // clamp of a distance function is 1-Lipschitz by construction
  fs_.push_back(clamped_distance(g, q, shift, -1.0, 1.0));
}

LipFamily LipFamily::cones(GridSpace g, const std::vector<PointRef>& anchors) {
  LipFamily fam;
  for (PointRef a : anchors) {
    fam.add_clamped_distance(g, a, 0.0);
    fam.add_clamped_distance(g, a, 0.5);
    fam.fs_.push_back(clamped_distance(g, a, 0.0, 0.0, 1.0));
  }
  fam.fs_.push_back(constant_function(g, 1.0));
  return fam;
}

double d_uniform(const DtmEvaluator& mu, const DtmEvaluator& nu,
                 const std::vector<GridFunction>& panel) {
  double best = 0.0;
  for (const auto& f : panel) {
    if (!f.nonnegative() || f.sup_norm() > 1.0 + 1e-12)
      throw ContractViolation("d_uniform panel must be nonnegative with norm <= 1");
    best = std::max(best,
                    std::abs(quasi_integral(mu, f) - quasi_integral(nu, f)));
  }
  return best;
}

namespace {

// family evaluation with the closure convention; see ProkhorovResult docs
struct FamilyEvaluator {
  const DtmEvaluator& mu;
  const DtmEvaluator& nu;
  GridSpace g;

  bool zero_limit_ok(const Region& a) const {
    const Region cl = closure(a);
    return mu(a) <= nu(cl) + kAxiomTol && nu(a) <= mu(cl) + kAxiomTol;
  }
  bool at_t_ok(const Region& a, double t,
               const std::vector<double>& sqd) const {
    const double limit = t * g.n;
    const double limit2 = limit * limit;
    CellSet core(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c)
      if (sqd[c] < limit2) core.set(c);
    const Region dil = Region::compact(g, core);
    return mu(a) <= nu(dil) + t + kAxiomTol && nu(a) <= mu(dil) + t + kAxiomTol;
  }
};

}  // namespace

ProkhorovResult prokhorov(const DtmEvaluator& mu, const DtmEvaluator& nu,
                          const SetFamily& fam, double resolution) {
  if (!(resolution > 0.0))
    throw ContractViolation("prokhorov: resolution must be positive");
  const GridSpace g = mu.grid();
  if (nu.grid() != g) throw ContractViolation("prokhorov: grid mismatch");

  ProkhorovResult res;
  res.resolution = resolution;
  res.mode = fam.mode == SetFamily::Mode::Exhaustive ? "exhaustive"
                                                     : "family-restricted";

  if (fam.mode == SetFamily::Mode::Exhaustive) {
    const int nc = g.cell_count();
    const size_t total = size_t{1} << nc;
    std::vector<double> mu_open(total), mu_compact(total), nu_open(total),
        nu_compact(total);
    for (size_t mask = 0; mask < total; ++mask) {
      const CellSet cs = CellSet::from_low_word(nc, static_cast<uint32_t>(mask));
      mu_open[mask] = mu(Region::open(g, cs));
      mu_compact[mask] = mu(Region::compact(g, cs));
      nu_open[mask] = nu(Region::open(g, cs));
      nu_compact[mask] = nu(Region::compact(g, cs));
    }

    auto ok_zero = [&]() {
      for (size_t a = 0; a < total; ++a) {
        if (mu_compact[a] > nu_compact[a] + kAxiomTol) return false;
        if (nu_compact[a] > mu_compact[a] + kAxiomTol) return false;
        if (mu_open[a] > nu_compact[a] + kAxiomTol) return false;
        if (nu_open[a] > mu_compact[a] + kAxiomTol) return false;
      }
      return true;
    };
    if (ok_zero()) {
      res.value = 0.0;
      return res;
    }

    // per-cell dilation masks for each t on the grid
    const double tmax = norm_of(mu) + norm_of(nu) + resolution;
    std::optional<uint32_t> witness_mask;
    std::optional<Kind> witness_kind;
    for (double t = resolution; t <= tmax + resolution; t += resolution) {
      std::vector<uint32_t> cell_dil(nc, 0);
      const double limit2 = (t * g.n) * (t * g.n);
      for (int c0 = 0; c0 < nc; ++c0)
        for (int c1 = 0; c1 < nc; ++c1) {
          const double dr = g.row_of(c0) - g.row_of(c1);
          const double dc = g.col_of(c0) - g.col_of(c1);
          if (dr * dr + dc * dc < limit2) cell_dil[c0] |= uint32_t{1} << c1;
        }
      auto dil_of = [&](uint32_t mask) {
        uint32_t out = 0;
        while (mask) {
          out |= cell_dil[__builtin_ctz(mask)];
          mask &= mask - 1;
        }
        return out;
      };
      bool all_ok = true;
      for (size_t a = 0; a < total && all_ok; ++a) {
        const uint32_t dm = dil_of(static_cast<uint32_t>(a));
        const double nu_dil = nu_compact[dm], mu_dil = mu_compact[dm];
        if (mu_compact[a] > nu_dil + t + kAxiomTol ||
            nu_compact[a] > mu_dil + t + kAxiomTol) {
          all_ok = false;
          witness_mask = static_cast<uint32_t>(a);
          witness_kind = Kind::Compact;
        } else if (mu_open[a] > nu_dil + t + kAxiomTol ||
                   nu_open[a] > mu_dil + t + kAxiomTol) {
          all_ok = false;
          witness_mask = static_cast<uint32_t>(a);
          witness_kind = Kind::Open;
        }
      }
      if (all_ok) {
        res.value = t;
        if (witness_mask)
          res.binding_witness = Region(
              g, *witness_kind, CellSet::from_low_word(nc, *witness_mask));
        return res;
      }
    }
    res.value = tmax;
    return res;
  }

  // family-restricted estimate
  FamilyEvaluator ev{mu, nu, g};
  bool zero_ok = true;
  for (const auto& a : fam.regions)
    if (!ev.zero_limit_ok(a)) {
      zero_ok = false;
      break;
    }
  if (zero_ok) {
    res.value = 0.0;
    return res;
  }

  std::vector<std::vector<double>> sqds;
  sqds.reserve(fam.regions.size());
  for (const auto& a : fam.regions)
    sqds.push_back(squared_cell_distances(g, a.cells));

  const double tmax = norm_of(mu) + norm_of(nu) + resolution;
  const Region* witness = nullptr;
  for (double t = resolution; t <= tmax + resolution; t += resolution) {
    bool all_ok = true;
    for (size_t i = 0; i < fam.regions.size(); ++i) {
      if (!ev.at_t_ok(fam.regions[i], t, sqds[i])) {
        all_ok = false;
        witness = &fam.regions[i];
        break;
      }
    }
    if (all_ok) {
      res.value = t;
      if (witness) res.binding_witness = *witness;
      return res;
    }
  }
  res.value = tmax;
  return res;
}

double kr(const DtmEvaluator& mu, const DtmEvaluator& nu, const LipFamily& fam) {
  double best = 0.0;
  for (const auto& f : fam.functions())
    best = std::max(best, std::abs(signed_quasi_integral(mu, f) -
                                   signed_quasi_integral(nu, f)));
  return best;
}

MetricAxiomReport metric_axiom_suite(const DistanceFn& dist,
                                     const std::vector<DtmEvaluator>& pool) {
  MetricAxiomReport rep;
  const int n = static_cast<int>(pool.size());
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = dist(pool[i], pool[j]);

  for (int i = 0; i < n; ++i) {
    ++rep.checks;
    if (d[i][i] > kAxiomTol)
      rep.violations.push_back({"zero-self-distance", {i}, d[i][i]});
    for (int j = 0; j < n; ++j) {
      ++rep.checks;
      if (d[i][j] < -kAxiomTol)
        rep.violations.push_back({"nonnegativity", {i, j}, -d[i][j]});
      if (std::abs(d[i][j] - d[j][i]) > kAxiomTol)
        rep.violations.push_back(
            {"symmetry", {i, j}, std::abs(d[i][j] - d[j][i])});
      for (int k = 0; k < n; ++k) {
        ++rep.checks;
        const double excess = d[i][k] - d[i][j] - d[j][k];
        if (excess > kAxiomTol)
          rep.violations.push_back({"triangle", {i, j, k}, excess});
      }
    }
  }
  return rep;
}

MetricAxiomReport prokhorov_identity_check(const std::vector<DtmEvaluator>& pool,
                                           double resolution) {
  MetricAxiomReport rep;
  if (pool.empty()) return rep;
  const GridSpace g = pool.front().grid();
  const SetFamily fam = SetFamily::exhaustive(g);
  const int nc = g.cell_count();
  const size_t total = size_t{1} << nc;
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = i; j < pool.size(); ++j) {
      const double dp = prokhorov(pool[i], pool[j], fam, resolution).value;
      ++rep.checks;
      if (dp == 0.0) {
        for (size_t mask = 0; mask < total; ++mask) {
          const Region r(g, Kind::Compact,
                         CellSet::from_low_word(nc, static_cast<uint32_t>(mask)));
          if (std::abs(pool[i](r) - pool[j](r)) > kAxiomTol) {
            rep.violations.push_back({"identity-of-indiscernibles",
                                      {static_cast<int>(i), static_cast<int>(j)},
                                      std::abs(pool[i](r) - pool[j](r))});
            break;
          }
        }
      }
    }
  return rep;
}

double loglog_slope(const std::vector<int>& xs, const std::vector<double>& ys,
                    double floor_value) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= floor_value) continue;
    const double lx = std::log(static_cast<double>(xs[i]));
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceLinkReport convergence_link(const MeasureSequence& s,
                                       LinkMetric which, const TestConfig& cfg,
                                       const ConvergenceLinkConfig& link,
                                       const SetFamily* fam,
                                       const LipFamily* lip) {
  ConvergenceLinkReport rep;
  const GridSpace g = s.limit.grid();

  if (which == LinkMetric::KR) {
    // uniform bounded-variation hypothesis over the evaluated prefix
    for (int k = 1; k <= s.horizon; k += link.stride)
      if (norm_of(s.member(k)) > link.variation_bound + kAxiomTol)
        throw std::runtime_error("variation bound missing");
    if (norm_of(s.limit) > link.variation_bound + kAxiomTol)
      throw std::runtime_error("variation bound missing");
  }

  SetFamily default_fam = SetFamily::structured(g, std::max(1, g.n / 8));
  const SetFamily& family = fam ? *fam : default_fam;
  LipFamily default_lip;
  if (!lip) {
    std::vector<PointRef> anchors{{g.cell_at(g.n / 2, g.n / 2)},
                                  {g.cell_at(g.n / 4, g.n / 4)},
                                  {g.cell_at(3 * g.n / 4, g.n / 2)}};
    default_lip = LipFamily::cones(g, anchors);
  }
  const LipFamily& lips = lip ? *lip : default_lip;
  const double resolution =
      link.resolution > 0 ? link.resolution : g.cell_width() / 4.0;

  for (int k = 1; k <= s.horizon; k += link.stride) {
    const DtmEvaluator mk = s.member(k);
    const double dist = which == LinkMetric::Prokhorov
                            ? prokhorov(mk, s.limit, family, resolution).value
                            : kr(mk, s.limit, lips);
    rep.indices.push_back(k);
    rep.distances.push_back(dist);
  }

  double tail = 0.0;
  const size_t tail_from = rep.distances.size() / 2;
  for (size_t i = tail_from; i < rep.distances.size(); ++i)
    tail = std::max(tail, rep.distances[i]);
  rep.tail_distance = tail;
  // center-to-center geometry leaves an O(cell_width) floor on distances to
  // evaluators that see cell neighborhoods; the threshold absorbs one cell
  // diameter, plus the t-grid resolution for the Prokhorov estimator
  const double cell_diameter = g.cell_width() * std::numbers::sqrt2;
  const double tol = link.distance_epsilon + cell_diameter +
                     (which == LinkMetric::Prokhorov ? resolution : 0.0);
  rep.distances_vanish = tail <= tol;
  rep.fitted_slope = loglog_slope(rep.indices, rep.distances, resolution / 16.0);
  rep.hypothesis_met = rep.distances_vanish;

  rep.weak_convergence = crosscheck(s, cfg);
  rep.all_conditions_converged =
      std::all_of(rep.weak_convergence.conditions.begin(),
                  rep.weak_convergence.conditions.end(),
                  [](const ConditionReport& c) {
                    return c.verdict == Verdict::Converged;
                  });
  return rep;
}

}  // namespace topmeas
