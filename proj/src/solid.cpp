#include "topmeas/solid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <set>
#include <unordered_map>

#include "topmeas/integral.hpp"

namespace topmeas {

namespace {

int points_in(const Region& r, const std::vector<PointRef>& pts) {
  int c = 0;
  for (PointRef p : pts)
    if (r.cells.test(p.cell)) ++c;
  return c;
}

}  // namespace

SolidSetFunction nvssf(GridSpace g, std::vector<PointRef> points, int n) {
  if (n < 1) throw ContractViolation("nvssf: n must be positive");
  if (static_cast<int>(points.size()) != 2 * n + 1)
    throw ContractViolation("nvssf: need exactly 2n+1 points");
  std::set<int> distinct;
  for (PointRef p : points) {
    if (p.cell < 0 || p.cell >= g.cell_count())
      throw ContractViolation("nvssf: point outside the grid");
    distinct.insert(p.cell);
  }
  if (static_cast<int>(distinct.size()) != 2 * n + 1)
    throw ContractViolation("nvssf: points must be distinct");

  nlohmann::json desc{{"type", "nvssf"}, {"grid_n", g.n}, {"n", n}};
  desc["points"] = nlohmann::json::array();
  for (PointRef p : points) desc["points"].push_back(p.cell);

  return SolidSetFunction(
      "nvssf", g,
      [points = std::move(points), n](const Region& r) {
        return static_cast<double>(points_in(r, points) / 2) / n;
      },
      std::move(desc));
}

SolidSetFunction two_point_area(GridSpace g, PointRef p1, PointRef p2,
                                std::vector<double> density) {
  if (p1 == p2) throw ContractViolation("two_point_area: points must differ");
  if (density.empty())
    density.assign(g.cell_count(), g.cell_area());
  else if (static_cast<int>(density.size()) != g.cell_count())
    throw ContractViolation("two_point_area: wrong density size");

  nlohmann::json desc{{"type", "two_point_area"},
                      {"grid_n", g.n},
                      {"points", {p1.cell, p2.cell}}};
  std::vector<PointRef> pts{p1, p2};
  auto dens = std::make_shared<const std::vector<double>>(std::move(density));
  return SolidSetFunction(
      "two_point_area", g,
      [pts, dens](const Region& r) {
        const int k = points_in(r, pts);
        if (k == 0) return 0.0;
        double area = 0.0;
        r.cells.for_each([&](int c) { area += (*dens)[c]; });
        return k == 1 ? area : 2.0 * area;
      },
      std::move(desc));
}

namespace {

struct CellSetHash {
  size_t operator()(const CellSet& s) const { return s.fnv_hash(); }
};

struct ExtensionCache {
  std::mutex mu;
  std::unordered_map<CellSet, double, CellSetHash> open_vals, compact_vals;
};

double extension_compact(const SolidSetFunction& ssf, const GridSpace& g,
                         const CellSet& cells, ExtensionCache& cache);

double extension_open(const SolidSetFunction& ssf, const GridSpace& g,
                      const CellSet& cells, ExtensionCache& cache) {
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.open_vals.find(cells);
    if (it != cache.open_vals.end()) return it->second;
  }
  const double v = ssf.whole_space_value() -
                   extension_compact(ssf, g, cells.complement(), cache);
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.open_vals.emplace(cells, v);
  return v;
}

double extension_compact(const SolidSetFunction& ssf, const GridSpace& g,
                         const CellSet& cells, ExtensionCache& cache) {
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.compact_vals.find(cells);
    if (it != cache.compact_vals.end()) return it->second;
  }
  double total = 0.0;
  const double whole = ssf.whole_space_value();
  for (const CellSet& comp : connected_components(g, cells, /*eight=*/true)) {
    double term = whole;
    const CellSet rest = comp.complement();
    for (const CellSet& u : connected_components(g, rest, /*eight=*/false)) {
      const Region open_u = Region::open(g, u);
      if (!is_solid(open_u))
        throw ExtensionError(
            "extension inapplicable: non-solid complement component of size " +
            std::to_string(u.count()));
      term -= ssf.value(open_u);
    }
    total += term;
  }
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.compact_vals.emplace(cells, total);
  return total;
}

}  // namespace

DtmEvaluator extend(const SolidSetFunction& ssf) {
  nlohmann::json desc{{"type", "solid_extension"},
                      {"grid_n", ssf.grid().n},
                      {"ssf", ssf.descriptor()}};
  auto cache = std::make_shared<ExtensionCache>();
  auto shared = std::make_shared<const SolidSetFunction>(ssf);
  return DtmEvaluator(
      "extend(" + ssf.name() + ")", ssf.grid(),
      [shared, cache](const Region& r) {
        if (r.is_compact())
          return extension_compact(*shared, r.grid, r.cells, *cache);
        return extension_open(*shared, r.grid, r.cells, *cache);
      },
      std::move(desc));
}

std::vector<AxiomReport> verify_on_solid_domain(const SolidSetFunction& ssf) {
  const GridSpace g = ssf.grid();
  const int nc = g.cell_count();
  if (nc > 16)
    throw ContractViolation("solid-domain verification is exhaustive; n <= 4");
  const uint32_t full = static_cast<uint32_t>((size_t{1} << nc) - 1);

  struct SolidEntry {
    uint32_t mask;
    Kind kind;
    uint32_t clo8_mask;
    double value;
  };
  std::vector<SolidEntry> solids;
  for (uint32_t mask = 1; mask != 0 && mask <= full; ++mask) {
    const CellSet cs = CellSet::from_low_word(nc, mask);
    for (Kind k : {Kind::Open, Kind::Compact}) {
      const Region r(g, k, cs);
      if (!is_solid(r)) continue;
      solids.push_back({mask, k,
                        static_cast<uint32_t>(closure8(g, cs).low_word()),
                        ssf.value(r)});
    }
    if (mask == full) break;
  }

  AxiomReport mono{"monotonicity"}, super{"superadditivity"},
      dtm1{"DTM1"}, regular{"regularity"};
  for (AxiomReport* r : {&mono, &super, &dtm1, &regular}) {
    r->pass = true;
    r->margin = 0.0;
  }
  auto note = [&](AxiomReport& rep, double slack, const SolidEntry& a,
                  const SolidEntry& b, const char* what) {
    ++rep.sets_checked;
    if (rep.sets_checked == 1 || slack < rep.margin) rep.margin = slack;
    if (slack < -kAxiomTol && !rep.witness) {
      rep.pass = false;
      rep.witness = RegionWitness{
          {Region(g, a.kind, CellSet::from_low_word(nc, a.mask)),
           Region(g, b.kind, CellSet::from_low_word(nc, b.mask))},
          what};
    }
  };

  auto subset = [&](const SolidEntry& in, const SolidEntry& out) {
    if (in.kind == Kind::Compact && out.kind == Kind::Open)
      return (in.clo8_mask & ~out.mask) == 0;
    return (in.mask & ~out.mask) == 0;
  };
  auto disjoint = [&](const SolidEntry& a, const SolidEntry& b) {
    if (a.kind == Kind::Compact && b.kind == Kind::Compact)
      return (a.clo8_mask & b.mask) == 0;
    return (a.mask & b.mask) == 0;
  };

  // whole-space entries for the superadditivity upper set
  const SolidEntry whole_compact{full, Kind::Compact, full,
                                 ssf.value(Region::whole(g, Kind::Compact))};
  std::unordered_map<uint64_t, const SolidEntry*> by_key;
  for (const auto& s : solids)
    by_key[(uint64_t(s.mask) << 1) | (s.kind == Kind::Compact)] = &s;

  for (const auto& a : solids) {
    for (const auto& b : solids) {
      if (subset(a, b)) note(mono, b.value - a.value, a, b, "nested solids");
      if (&a < &b && disjoint(a, b)) {
        note(super, whole_compact.value - a.value - b.value, a, b,
             "disjoint solids inside the whole space");
        // union as compact, when itself solid
        auto it = by_key.find((uint64_t(a.mask | b.mask) << 1) | 1);
        if (it != by_key.end())
          note(super, it->second->value - a.value - b.value, a, b,
               "disjoint solids inside their solid union");
        if (a.kind == Kind::Compact && b.kind == Kind::Compact)
          if (it != by_key.end())
            note(dtm1,
                 -std::abs(it->second->value - a.value - b.value), a, b,
                 "disjoint solid compacts with solid union");
      }
      if (a.kind == Kind::Compact && b.kind == Kind::Open &&
          (a.clo8_mask & ~b.mask) == 0)
        note(regular, b.value - a.value, a, b,
             "solid compact inside a solid open");
    }
  }
  return {mono, super, dtm1, regular};
}

// --- geometry helpers -------------------------------------------------------

CellSet ball_cells(const GridSpace& g, int center_cell, double radius) {
  CellSet s(g.cell_count());
  const double r2 = radius * radius;
  const auto [cx, cy] = g.center(center_cell);
  for (int c = 0; c < g.cell_count(); ++c) {
    const auto [x, y] = g.center(c);
    if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r2) s.set(c);
  }
  return s;
}

CellSet segment_tube_cells(const GridSpace& g, int cell_a, int cell_b,
                           double radius) {
  const auto [ax, ay] = g.center(cell_a);
  const auto [bx, by] = g.center(cell_b);
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  CellSet s(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) {
    const auto [x, y] = g.center(c);
    double t = len2 > 0 ? ((x - ax) * dx + (y - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double px = ax + t * dx, py = ay + t * dy;
    if ((x - px) * (x - px) + (y - py) * (y - py) <= radius * radius) s.set(c);
  }
  return s;
}

// --- nonlinearity search -----------------------------------------------------

std::optional<NonlinearityWitness> nonlinearity_witness(
    const DtmEvaluator& m, const NonlinearitySearch& cfg) {
  const GridSpace g = m.grid();
  const double h = g.cell_width();

  std::vector<int> apexes = cfg.focus_cells;
  const auto& d = m.descriptor();
  if (d.contains("ssf") && d["ssf"].contains("points"))
    for (const auto& p : d["ssf"]["points"]) apexes.push_back(p.get<int>());
  if (d.contains("points"))
    for (const auto& p : d["points"]) apexes.push_back(p.get<int>());
  if (d.contains("cell")) apexes.push_back(d["cell"].get<int>());
  if (apexes.empty()) {
    const int step = std::max(1, g.n / 3);
    for (int r = step / 2; r < g.n; r += step)
      for (int c = step / 2; c < g.n; c += step) apexes.push_back(g.cell_at(r, c));
  }
  std::sort(apexes.begin(), apexes.end());
  apexes.erase(std::unique(apexes.begin(), apexes.end()), apexes.end());

  std::vector<GridFunction> pool;
  for (int a : apexes) {
    pool.push_back(peak_cone(g, {a}, 1.0, 1.0));
    pool.push_back(plateau(g, ball_cells(g, a, 2.2 * h)));
  }
  for (size_t i = 0; i < apexes.size(); ++i)
    for (size_t j = i + 1; j < apexes.size(); ++j)
      pool.push_back(plateau(g, segment_tube_cells(g, apexes[i], apexes[j], 1.2 * h)));
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.random_candidates; ++i)
    pool.push_back(random_piecewise(g, rng, 3));

  std::optional<NonlinearityWitness> best;
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = i; j < pool.size(); ++j) {
      const double gap =
          std::abs(quasi_integral(m, pool[i].plus(pool[j])) -
                   quasi_integral(m, pool[i]) - quasi_integral(m, pool[j]));
      if (gap > cfg.threshold && (!best || gap > best->gap))
        best = NonlinearityWitness{pool[i], pool[j], gap};
    }
  return best;
}

}  // namespace topmeas
