#include "topmeas/integral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace topmeas {

double StepFunction::value_at(double t) const {
  size_t idx;
  if (left_continuous) {
    idx = std::lower_bound(breakpoints.begin(), breakpoints.end(), t) -
          breakpoints.begin();  // count of breakpoints < t
  } else {
    idx = std::upper_bound(breakpoints.begin(), breakpoints.end(), t) -
          breakpoints.begin();  // count of breakpoints <= t
  }
  return plateaus[idx];
}

std::vector<double> StepFunction::discontinuities(double tol) const {
  std::vector<double> out;
  for (size_t i = 0; i < breakpoints.size(); ++i)
    if (std::abs(plateaus[i + 1] - plateaus[i]) > tol)
      out.push_back(breakpoints[i]);
  return out;
}

namespace {

struct LevelDecomposition {
  std::vector<double> values;    // distinct, ascending
  std::vector<CellSet> uppers;   // uppers[j] = cells with f >= values[j]
};

LevelDecomposition decompose(const GridFunction& f) {
  LevelDecomposition d;
  const int nc = f.grid.cell_count();
  std::vector<int> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return f.values[a] > f.values[b]; });

  CellSet acc(nc);
  std::vector<CellSet> desc_sets;
  std::vector<double> desc_vals;
  size_t i = 0;
  while (i < order.size()) {
    const double v = f.values[order[i]];
    while (i < order.size() && f.values[order[i]] == v) {
      acc.set(order[i]);
      ++i;
    }
    desc_vals.push_back(v);
    desc_sets.push_back(acc);
  }
  d.values.assign(desc_vals.rbegin(), desc_vals.rend());
  d.uppers.assign(desc_sets.rbegin(), desc_sets.rend());
  return d;
}

}  // namespace

// With distinct values v_0 < ... < v_{m-1} and S_i = {f >= v_i}, both
// distribution functions are constant between consecutive values and the
// plateau just before the end is the top level set:
//   R1 on [v_{i-1}, v_i) equals m(open S_i);  R1 < v_0 is m(open S_0).
//   R2 on (v_{i-1}, v_i] equals m(compact S_i); R2 <= v_0 is m(compact S_0).
// Both collapse to plateaus[i] = m(S_i as the respective kind), 0 at the end.
StepFunction r1(const DtmEvaluator& m, const GridFunction& f) {
  const auto d = decompose(f);
  StepFunction s;
  s.left_continuous = false;
  s.breakpoints = d.values;
  s.plateaus.resize(d.values.size() + 1);
  for (size_t j = 0; j < d.values.size(); ++j)
    s.plateaus[j] = m(Region::open(f.grid, d.uppers[j]));
  s.plateaus.back() = 0.0;
  return s;
}

StepFunction r2(const DtmEvaluator& m, const GridFunction& f) {
  const auto d = decompose(f);
  StepFunction s;
  s.left_continuous = true;
  s.breakpoints = d.values;
  s.plateaus.resize(d.values.size() + 1);
  for (size_t j = 0; j < d.values.size(); ++j)
    s.plateaus[j] = m(Region::compact(f.grid, d.uppers[j]));
  s.plateaus.back() = 0.0;
  return s;
}

IntegralResult integrate(const DtmEvaluator& m, const GridFunction& f) {
  const auto d = decompose(f);
  IntegralResult res;
  res.breakpoints = d.values;

  // Distribution integral in jump form: sum over distinct values w_j of
  // w_j * (m(S_j) - m(S_{j+1})) with S_j = {f >= w_j}. Telescoping makes
  // point masses and indicator evaluators exact.
  double r1_sum = 0.0, r2_sum = 0.0;
  const size_t count = d.values.size();
  std::vector<double> open_vals(count), compact_vals(count);
  for (size_t j = 0; j < count; ++j) {
    open_vals[j] = m(Region::open(f.grid, d.uppers[j]));
    compact_vals[j] = m(Region::compact(f.grid, d.uppers[j]));
  }
  for (size_t j = 0; j < count; ++j) {
    const double next_open = (j + 1 < count) ? open_vals[j + 1] : 0.0;
    const double next_compact = (j + 1 < count) ? compact_vals[j + 1] : 0.0;
    r1_sum += d.values[j] * (open_vals[j] - next_open);
    r2_sum += d.values[j] * (compact_vals[j] - next_compact);
  }
  res.value = r1_sum;
  res.r2_value = r2_sum;
  res.r2_gap = std::abs(r1_sum - r2_sum);
  res.r2_equal = res.r2_gap <= 1e-12;
  return res;
}

IntegralResult integrate_strict(const DtmEvaluator& m, const GridFunction& f) {
  IntegralResult res = integrate(m, f);
  if (res.r2_gap > 1e-9)
    throw std::runtime_error("distribution inconsistency");
  return res;
}

double signed_quasi_integral(const DtmEvaluator& m, const GridFunction& f) {
  if (f.nonnegative()) return integrate(m, f).value;
  return integrate(m, f.positive_part()).value -
         integrate(m, f.negative_part()).value;
}

bool DFunctionalReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const PropertyCheck& c) { return c.pass; });
}

namespace {

void record(PropertyCheck& c, double slack, const std::string& witness) {
  ++c.checks;
  if (c.checks == 1 || slack < c.worst_margin) {
    c.worst_margin = slack;
    if (slack < -kAxiomTol) {
      c.pass = false;
      c.witness = witness;
    }
  }
}

bool supports_8_separated(const GridFunction& f, const GridFunction& g) {
  const CellSet sf = f.support();
  const CellSet sg = g.support();
  return !closure8(f.grid, sf).intersects(sg);
}

}  // namespace

DFunctionalReport dfunctional_suite(const DtmEvaluator& m,
                                    const std::vector<GridFunction>& fs,
                                    bool tm_classified) {
  DFunctionalReport rep;
  PropertyCheck homog{"positive-homogeneity"}, monot{"monotonicity"},
      orth{"orthogonal-additivity"}, bounds{"total-mass bounds"},
      lip{"lipschitz"};
  const double total = norm_of(m);

  for (size_t i = 0; i < fs.size(); ++i) {
    const GridFunction& f = fs[i];
    if (!f.nonnegative()) continue;
    const double qf = quasi_integral(m, f);

    for (double c : {0.0, 0.5, 2.0, 3.25}) {
      const double dev = quasi_integral(m, f.scaled(c)) - c * qf;
      record(homog, -std::abs(dev),
             "f[" + std::to_string(i) + "], c=" + std::to_string(c));
    }

    record(bounds, qf - total * f.min_value(),
           "lower bound, f[" + std::to_string(i) + "]");
    record(bounds, total * f.max_value() - qf,
           "upper bound, f[" + std::to_string(i) + "]");

    for (size_t j = 0; j < fs.size(); ++j) {
      if (i == j) continue;
      const GridFunction& g = fs[j];
      if (!g.nonnegative()) continue;
      bool le = true;
      for (size_t c = 0; c < f.values.size(); ++c)
        if (f.values[c] > g.values[c]) {
          le = false;
          break;
        }
      if (le)
        record(monot, quasi_integral(m, g) - qf,
               "f[" + std::to_string(i) + "] <= f[" + std::to_string(j) + "]");
      if (j > i && supports_8_separated(f, g)) {
        const double dev =
            quasi_integral(m, f.plus(g)) - qf - quasi_integral(m, g);
        record(orth, -std::abs(dev),
               "f[" + std::to_string(i) + "] _|_ f[" + std::to_string(j) + "]");
      }
      if (tm_classified && j > i) {
        GridFunction diff = f;
        for (size_t c = 0; c < diff.values.size(); ++c)
          diff.values[c] -= g.values[c];
        const double bound = 2.0 * diff.sup_norm() * total;
        record(lip, bound - std::abs(qf - quasi_integral(m, g)),
               "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  rep.checks = {homog, monot, orth, bounds};
  if (tm_classified) rep.checks.push_back(lip);
  return rep;
}

RoundtripReport roundtrip_check(const DtmEvaluator& m, const Region& k) {
  if (!k.is_compact()) throw ContractViolation("roundtrip_check wants a compact K");
  const GridSpace g = k.grid;
  RoundtripReport rep;
  rep.compact_value = m(k);

  // Plateau family: g_j = 1 on the j-fold 8-dilation of K (so g_j >= 1 on a
  // neighborhood of K and the open level set still contains K), plus the
  // constant 1.
  double inf = std::numeric_limits<double>::infinity();
  CellSet dil = k.cells;
  const CellSet fullset = CellSet::full(g.cell_count());
  while (dil != fullset) {
    CellSet next = closure8(g, dil);
    if (next == dil) break;  // empty K: dilation stays empty
    dil = std::move(next);
    inf = std::min(inf, quasi_integral(m, plateau(g, dil, 1.0)));
    ++rep.family_size;
  }
  if (k.is_empty()) {
    inf = std::min(inf, quasi_integral(m, plateau(g, k.cells, 1.0)));
    ++rep.family_size;
  }
  inf = std::min(inf, quasi_integral(m, constant_function(g, 1.0)));
  ++rep.family_size;

  rep.infimum = inf;
  rep.gap = inf - rep.compact_value;
  rep.lower_bound_holds = rep.gap >= -kAxiomTol;
  rep.exact = std::abs(rep.gap) <= kAxiomTol;
  return rep;
}

}  // namespace topmeas
