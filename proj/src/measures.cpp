#include "topmeas/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace topmeas {

namespace {

void require_weights_ok(const std::vector<double>& w) {
  for (double x : w)
    if (!std::isfinite(x) || x < 0.0)
      throw ContractViolation("weights must be finite and nonnegative");
}

}  // namespace

DtmEvaluator point_mass(GridSpace g, PointRef a) {
  if (a.cell < 0 || a.cell >= g.cell_count())
    throw ContractViolation("point_mass: cell outside the grid");
  nlohmann::json d{{"type", "point_mass"}, {"grid_n", g.n}, {"cell", a.cell}};
  return DtmEvaluator(
      "point_mass", g,
      [cell = a.cell](const Region& r) {
        return r.cells.test(cell) ? 1.0 : 0.0;
      },
      std::move(d));
}

DtmEvaluator radon_from_weights(GridSpace g, std::vector<double> weights) {
  if (static_cast<int>(weights.size()) != g.cell_count())
    throw ContractViolation("radon_from_weights: wrong weight count");
  require_weights_ok(weights);
  nlohmann::json d{{"type", "radon"}, {"grid_n", g.n}, {"weights", weights}};
  auto w = std::make_shared<const std::vector<double>>(std::move(weights));
  return DtmEvaluator(
      "radon", g,
      [w](const Region& r) {
        double s = 0.0;
        r.cells.for_each([&](int c) { s += (*w)[c]; });
        return s;
      },
      std::move(d));
}

DtmEvaluator uniform_radon(GridSpace g) {
  std::vector<double> w(g.cell_count(), 1.0 / g.cell_count());
  return radon_from_weights(g, std::move(w));
}

DtmEvaluator indicator_dtm(const Region& d) {
  if (!d.is_compact())
    throw ContractViolation("indicator_dtm wants a compact region");
  if (d.is_empty()) throw ContractViolation("indicator_dtm: D must be nonempty");
  if (connected_components(d.grid, d.cells, true).size() != 1)
    throw ContractViolation("indicator_dtm: D must be 8-connected");
  nlohmann::json desc{{"type", "indicator"},
                      {"grid_n", d.grid.n},
                      {"cells", d.cells.to_indices()}};
  const Region dcopy = d;
  return DtmEvaluator(
      "indicator", d.grid,
      [dcopy](const Region& r) {
        if (r.is_compact()) return dcopy.cells.is_subset_of(r.cells) ? 1.0 : 0.0;
        return contains_region(r, dcopy) ? 1.0 : 0.0;
      },
      std::move(desc));
}

DtmEvaluator combine(std::vector<std::pair<double, DtmEvaluator>> terms) {
  if (terms.empty()) throw ContractViolation("combine: no terms");
  const GridSpace g = terms.front().second.grid();
  nlohmann::json desc{{"type", "combine"}, {"grid_n", g.n}};
  desc["terms"] = nlohmann::json::array();
  for (auto& [coef, m] : terms) {
    if (!std::isfinite(coef) || coef < 0.0)
      throw ContractViolation("combine: coefficients must be finite and nonnegative");
    if (m.grid() != g) throw ContractViolation("combine: grid mismatch");
    desc["terms"].push_back({{"coef", coef}, {"m", m.descriptor()}});
  }
  auto shared = std::make_shared<const std::vector<std::pair<double, DtmEvaluator>>>(
      std::move(terms));
  return DtmEvaluator(
      "combine", g,
      [shared](const Region& r) {
        double s = 0.0;
        for (const auto& [coef, m] : *shared) s += coef * m(r);
        return s;
      },
      std::move(desc));
}

double norm_of(const DtmEvaluator& m) {
  return m(Region::whole(m.grid(), Kind::Compact));
}

bool annihilates_points(const DtmEvaluator& m) {
  const GridSpace g = m.grid();
  for (int c = 0; c < g.cell_count(); ++c) {
    CellSet s(g.cell_count());
    s.set(c);
    if (m(Region::compact(g, s)) > kAxiomTol) return false;
  }
  return true;
}

bool all_pass(const std::vector<AxiomReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const AxiomReport& r) { return r.pass; });
}

// ---------------------------------------------------------------------------
// verification machinery
// ---------------------------------------------------------------------------

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CheckAcc {
  std::string axiom;
  double margin = kInf;
  long long checked = 0;
  std::optional<RegionWitness> witness;

  void add(double slack, const std::function<RegionWitness()>& make_witness) {
    ++checked;
    if (slack < margin) {
      margin = slack;
      if (slack < -kAxiomTol) witness = make_witness();
    }
  }

  AxiomReport report(uint64_t seed) const {
    AxiomReport r;
    r.axiom = axiom;
    r.margin = (margin == kInf) ? 0.0 : margin;
    r.pass = !(margin < -kAxiomTol);
    r.sets_checked = checked;
    r.seed = seed;
    if (!r.pass) r.witness = witness;
    return r;
  }
};

// --- exhaustive tables (n <= 4, cell masks fit in 16 bits) -----------------

struct Tables {
  GridSpace g;
  int nc = 0;
  uint32_t full = 0;
  std::vector<double> open_val, compact_val;
  std::vector<uint32_t> clo8, ero8;
};

Region region_from_mask(const GridSpace& g, Kind k, uint32_t mask) {
  return Region(g, k, CellSet::from_low_word(g.cell_count(), mask));
}

Tables build_tables(const DtmEvaluator& m) {
  Tables t;
  t.g = m.grid();
  t.nc = t.g.cell_count();
  if (t.nc > 16)
    throw ContractViolation("exhaustive budget is legal only for n <= 4");
  const size_t total = size_t{1} << t.nc;
  t.full = static_cast<uint32_t>(total - 1);

  std::vector<uint32_t> cell_clo(t.nc, 0);
  for (int c = 0; c < t.nc; ++c) {
    CellSet one(t.nc);
    one.set(c);
    cell_clo[c] = static_cast<uint32_t>(closure8(t.g, one).low_word());
  }

  t.clo8.assign(total, 0);
  t.ero8.assign(total, 0);
  for (size_t mask = 1; mask < total; ++mask) {
    const uint32_t low = mask & (~mask + 1);
    const int lowbit = __builtin_ctz(static_cast<uint32_t>(mask));
    t.clo8[mask] = t.clo8[mask ^ low] | cell_clo[lowbit];
  }
  for (size_t mask = 0; mask < total; ++mask) {
    uint32_t e = 0;
    uint32_t mm = static_cast<uint32_t>(mask);
    while (mm) {
      const int c = __builtin_ctz(mm);
      if ((cell_clo[c] & ~static_cast<uint32_t>(mask)) == 0) e |= 1u << c;
      mm &= mm - 1;
    }
    t.ero8[mask] = e;
  }

  t.open_val.assign(total, 0.0);
  t.compact_val.assign(total, 0.0);
  for (size_t mask = 0; mask < total; ++mask) {
    t.open_val[mask] = m(region_from_mask(t.g, Kind::Open, mask));
    t.compact_val[mask] = m(region_from_mask(t.g, Kind::Compact, mask));
  }
  return t;
}

std::function<RegionWitness()> witness_fn(const GridSpace& g,
                                          std::vector<std::pair<Kind, uint32_t>> parts,
                                          std::string note) {
  return [g, parts = std::move(parts), note = std::move(note)]() {
    RegionWitness w;
    for (auto& [k, mask] : parts) w.regions.push_back(region_from_mask(g, k, mask));
    w.note = note;
    return w;
  };
}

// --- sampled-mode helpers ---------------------------------------------------

CellSet random_cells(const GridSpace& g, std::mt19937_64& rng, double density) {
  CellSet s(g.cell_count());
  std::bernoulli_distribution bit(density);
  for (int c = 0; c < g.cell_count(); ++c)
    if (bit(rng)) s.set(c);
  return s;
}

std::vector<CellSet> sample_pool(const GridSpace& g, std::mt19937_64& rng,
                                 int count) {
  std::vector<CellSet> pool;
  const int nc = g.cell_count();
  pool.push_back(CellSet(nc));            // empty
  pool.push_back(CellSet::full(nc));      // whole space
  for (int c = 0; c < nc; ++c) {          // singletons
    CellSet s(nc);
    s.set(c);
    pool.push_back(std::move(s));
  }
  std::uniform_real_distribution<double> dens(0.05, 0.95);
  while (static_cast<int>(pool.size()) < count)
    pool.push_back(random_cells(g, rng, dens(rng)));
  return pool;
}

// Row/column band pairs (A = band, B = adjacent band). Deterministic battery
// that exposes subadditivity failures of solid-set extensions on any grid.
std::vector<std::pair<CellSet, CellSet>> band_pairs(const GridSpace& g) {
  std::vector<std::pair<CellSet, CellSet>> out;
  const int n = g.n;
  auto col_band = [&](int c0, int c1) {
    CellSet s(g.cell_count());
    for (int r = 0; r < n; ++r)
      for (int c = c0; c <= c1; ++c) s.set(g.cell_at(r, c));
    return s;
  };
  auto row_band = [&](int r0, int r1) {
    CellSet s(g.cell_count());
    for (int r = r0; r <= r1; ++r)
      for (int c = 0; c < n; ++c) s.set(g.cell_at(r, c));
    return s;
  };
  for (int i = 0; i + 1 < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.emplace_back(col_band(0, i), col_band(i + 1, j));
      out.emplace_back(row_band(0, i), row_band(i + 1, j));
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<AxiomReport> verify_dtm_axioms(const DtmEvaluator& m,
                                           const Budget& budget) {
  const GridSpace g = m.grid();
  CheckAcc empty_zero{"empty-zero"}, dtm1{"DTM1"}, dtm2{"DTM2"}, dtm3{"DTM3"},
      mono{"monotonicity"}, super{"superadditivity"};

  if (budget.mode == Budget::Mode::Exhaustive) {
    const Tables t = build_tables(m);
    const size_t total = size_t{1} << t.nc;

    empty_zero.add(-std::abs(t.open_val[0]),
                   witness_fn(g, {{Kind::Open, 0}}, "open empty set"));
    empty_zero.add(-std::abs(t.compact_val[0]),
                   witness_fn(g, {{Kind::Compact, 0}}, "compact empty set"));

    // DTM1: additivity over compacts whose closed cell unions are disjoint,
    // i.e. cell sets that are not 8-adjacent.
    for (size_t cm = 0; cm < total; ++cm) {
      const uint32_t free = t.full & ~t.clo8[cm];
      uint32_t k = 0;
      for (;;) {  // submasks of free, ascending
        const double dev = t.compact_val[cm | k] - t.compact_val[cm] -
                           t.compact_val[k];
        dtm1.add(-std::abs(dev),
                 witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(cm)},
                                {Kind::Compact, k}},
                            "disjoint compact pair"));
        k = (k - free) & free;
        if (k == 0) break;
      }
    }

    // DTM2 surrogate: the open value is reached from inside at grid
    // resolution by the 8-erosion compact.
    for (size_t u = 0; u < total; ++u) {
      dtm2.add(t.open_val[u] - t.compact_val[t.ero8[u]],
               witness_fn(g, {{Kind::Open, static_cast<uint32_t>(u)},
                              {Kind::Compact, t.ero8[u]}},
                          "open region vs its 8-erosion"));
    }
    // DTM3 surrogate: the compact value is reached from outside by the
    // minimal open superset (its 8-dilation).
    for (size_t c = 0; c < total; ++c) {
      dtm3.add(t.open_val[t.clo8[c]] - t.compact_val[c],
               witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(c)},
                              {Kind::Open, t.clo8[c]}},
                          "compact region vs its 8-dilation"));
    }

    // Monotonicity: single-cell chains per kind plus interior <= closure.
    for (size_t a = 0; a < total; ++a) {
      for (int c = 0; c < t.nc; ++c) {
        if (a & (uint32_t{1} << c)) continue;
        const size_t b = a | (uint32_t{1} << c);
        mono.add(t.open_val[b] - t.open_val[a],
                 witness_fn(g, {{Kind::Open, static_cast<uint32_t>(a)},
                                {Kind::Open, static_cast<uint32_t>(b)}},
                            "nested opens"));
        mono.add(t.compact_val[b] - t.compact_val[a],
                 witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(a)},
                                {Kind::Compact, static_cast<uint32_t>(b)}},
                            "nested compacts"));
      }
      mono.add(t.compact_val[a] - t.open_val[a],
               witness_fn(g, {{Kind::Open, static_cast<uint32_t>(a)},
                              {Kind::Compact, static_cast<uint32_t>(a)}},
                          "interior vs closure"));
    }

    // Superadditivity over disjoint pairs; the union region is the minimal
    // superset, monotonicity extends the bound to every larger A.
    for (size_t a = 0; a < total; ++a) {
      const uint32_t free_cells = t.full & ~static_cast<uint32_t>(a);
      uint32_t b = 0;
      for (;;) {
        super.add(t.open_val[a | b] - t.open_val[a] - t.open_val[b],
                  witness_fn(g, {{Kind::Open, static_cast<uint32_t>(a)},
                                 {Kind::Open, b}},
                             "disjoint opens inside their union"));
        super.add(t.compact_val[a | b] - t.compact_val[a] - t.open_val[b],
                  witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(a)},
                                 {Kind::Open, b}},
                             "compact + disjoint open inside the compact union"));
        b = (b - free_cells) & free_cells;
        if (b == 0) break;
      }
      // compact pairs need the 8-separated notion; reuse the DTM1 geometry
      const uint32_t free8 = t.full & ~t.clo8[a];
      uint32_t k = 0;
      for (;;) {
        super.add(t.compact_val[a | k] - t.compact_val[a] - t.compact_val[k],
                  witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(a)},
                                 {Kind::Compact, k}},
                             "disjoint compacts inside their union"));
        k = (k - free8) & free8;
        if (k == 0) break;
      }
    }

    // sampled three-member families
    std::mt19937_64 rng(budget.seed + 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<uint32_t> dist(0, t.full);
    for (int it = 0; it < 2000; ++it) {
      const uint32_t a = dist(rng);
      const uint32_t b = dist(rng) & ~t.clo8[a];
      const uint32_t c = dist(rng) & ~(t.clo8[a] | t.clo8[b]);
      super.add(t.compact_val[a | b | c] - t.compact_val[a] -
                    t.compact_val[b] - t.compact_val[c],
                witness_fn(g, {{Kind::Compact, a}, {Kind::Compact, b},
                               {Kind::Compact, c}},
                           "three disjoint compacts inside their union"));
    }
  } else {
    std::mt19937_64 rng(budget.seed);
    const int nc = g.cell_count();
    auto pool = sample_pool(g, rng, std::max(budget.samples / 4, 64));

    auto open_of = [&](const CellSet& s) { return m(Region::open(g, s)); };
    auto compact_of = [&](const CellSet& s) { return m(Region::compact(g, s)); };

    empty_zero.add(-std::abs(open_of(CellSet(nc))),
                   [&] { return RegionWitness{{Region::empty(g, Kind::Open)}, "open empty set"}; });
    empty_zero.add(-std::abs(compact_of(CellSet(nc))),
                   [&] { return RegionWitness{{Region::empty(g, Kind::Compact)}, "compact empty set"}; });

    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (int it = 0; it < budget.samples; ++it) {
      const CellSet& a = pool[pick(rng)];
      const CellSet b0 = pool[pick(rng)];
      const CellSet cloa = closure8(g, a);
      const CellSet b = b0.minus(cloa);

      const double dev =
          compact_of(a | b) - compact_of(a) - compact_of(b);
      dtm1.add(-std::abs(dev), [&] {
        return RegionWitness{{Region::compact(g, a), Region::compact(g, b)},
                             "disjoint compact pair"};
      });

      dtm2.add(open_of(a) - compact_of(erode8(g, a)), [&] {
        return RegionWitness{{Region::open(g, a),
                              Region::compact(g, erode8(g, a))},
                             "open region vs its 8-erosion"};
      });
      dtm3.add(open_of(cloa) - compact_of(a), [&] {
        return RegionWitness{{Region::compact(g, a), Region::open(g, cloa)},
                             "compact region vs its 8-dilation"};
      });

      const CellSet sup = a | b0;
      mono.add(open_of(sup) - open_of(a), [&] {
        return RegionWitness{{Region::open(g, a), Region::open(g, sup)},
                             "nested opens"};
      });
      mono.add(compact_of(sup) - compact_of(a), [&] {
        return RegionWitness{{Region::compact(g, a), Region::compact(g, sup)},
                             "nested compacts"};
      });
      mono.add(compact_of(a) - open_of(a), [&] {
        return RegionWitness{{Region::open(g, a), Region::compact(g, a)},
                             "interior vs closure"};
      });

      super.add(compact_of(a | b) - compact_of(a) - compact_of(b), [&] {
        return RegionWitness{{Region::compact(g, a), Region::compact(g, b)},
                             "disjoint compacts inside their union"};
      });
      const CellSet bo = b0.minus(a);
      super.add(open_of(a | bo) - open_of(a) - open_of(bo), [&] {
        return RegionWitness{{Region::open(g, a), Region::open(g, bo)},
                             "disjoint opens inside their union"};
      });
    }
  }

  std::vector<AxiomReport> out;
  for (CheckAcc* acc : {&empty_zero, &dtm1, &dtm2, &dtm3, &mono, &super})
    out.push_back(acc->report(budget.seed));
  return out;
}

AxiomReport verify_tm(const DtmEvaluator& m, const Budget& budget) {
  const GridSpace g = m.grid();
  CheckAcc acc{"TM"};

  if (budget.mode == Budget::Mode::Exhaustive) {
    const Tables t = build_tables(m);
    const size_t total = size_t{1} << t.nc;
    const double total_mass = t.compact_val[t.full];
    for (size_t c = 0; c < total; ++c) {
      const uint32_t comp = t.full & ~static_cast<uint32_t>(c);
      acc.add(t.compact_val[c] + t.open_val[comp] - total_mass,
              witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(c)},
                             {Kind::Open, comp}},
                         "compact/open splitting of the whole space"));
    }
  } else {
    std::mt19937_64 rng(budget.seed);
    auto pool = sample_pool(g, rng, std::max(budget.samples, 64));
    const double total_mass = norm_of(m);
    for (const CellSet& c : pool) {
      const CellSet comp = c.complement();
      acc.add(m(Region::compact(g, c)) + m(Region::open(g, comp)) - total_mass,
              [&] {
                return RegionWitness{{Region::compact(g, c), Region::open(g, comp)},
                                     "compact/open splitting of the whole space"};
              });
    }
  }
  return acc.report(budget.seed);
}

AxiomReport verify_measure(const DtmEvaluator& m, const Budget& budget) {
  const GridSpace g = m.grid();
  CheckAcc acc{"measure"};

  // Subadditivity over disjoint pairs plus monotonicity implies the general
  // pair bound: m(C u K) <= m(C) + m(K \ C) <= m(C) + m(K).
  if (budget.mode == Budget::Mode::Exhaustive) {
    const Tables t = build_tables(m);
    const size_t total = size_t{1} << t.nc;
    for (size_t a = 0; a < total; ++a) {
      const uint32_t free_cells = t.full & ~static_cast<uint32_t>(a);
      uint32_t b = 0;
      for (;;) {
        acc.add(t.compact_val[a] + t.compact_val[b] - t.compact_val[a | b],
                witness_fn(g, {{Kind::Compact, static_cast<uint32_t>(a)},
                               {Kind::Compact, b}},
                           "compact pair subadditivity"));
        acc.add(t.open_val[a] + t.open_val[b] - t.open_val[a | b],
                witness_fn(g, {{Kind::Open, static_cast<uint32_t>(a)},
                               {Kind::Open, b}},
                           "open pair subadditivity"));
        b = (b - free_cells) & free_cells;
        if (b == 0) break;
      }
    }
  } else {
    std::mt19937_64 rng(budget.seed);
    auto pool = sample_pool(g, rng, std::max(budget.samples / 4, 64));
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    auto check_pair = [&](const CellSet& a, const CellSet& b) {
      acc.add(m(Region::compact(g, a)) + m(Region::compact(g, b)) -
                  m(Region::compact(g, a | b)),
              [&] {
                return RegionWitness{{Region::compact(g, a), Region::compact(g, b)},
                                     "compact pair subadditivity"};
              });
      acc.add(m(Region::open(g, a)) + m(Region::open(g, b)) -
                  m(Region::open(g, a | b)),
              [&] {
                return RegionWitness{{Region::open(g, a), Region::open(g, b)},
                                     "open pair subadditivity"};
              });
    };
    for (auto& [a, b] : band_pairs(g)) check_pair(a, b);
    for (int it = 0; it < budget.samples; ++it) {
      const CellSet& a = pool[pick(rng)];
      const CellSet b = pool[pick(rng)].minus(a);
      check_pair(a, b);
    }
  }
  return acc.report(budget.seed);
}

}  // namespace topmeas
