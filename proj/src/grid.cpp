#include "topmeas/grid.hpp"

#include <algorithm>
#include <limits>

namespace topmeas {

namespace {

constexpr double kFar = 1e18;

void check_same_grid(const Region& a, const Region& b) {
  if (a.grid != b.grid)
    throw ContractViolation("regions live on different grids");
}

}  // namespace

CellSet closure8(const GridSpace& g, const CellSet& s) {
  CellSet out(g.cell_count());
  s.for_each([&](int cell) {
    const int r = g.row_of(cell), c = g.col_of(cell);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (g.in_bounds(r + dr, c + dc)) out.set(g.cell_at(r + dr, c + dc));
  });
  return out;
}

CellSet erode8(const GridSpace& g, const CellSet& s) {
  CellSet out(g.cell_count());
  s.for_each([&](int cell) {
    const int r = g.row_of(cell), c = g.col_of(cell);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (g.in_bounds(r + dr, c + dc) && !s.test(g.cell_at(r + dr, c + dc)))
          return;
    out.set(cell);
  });
  return out;
}

std::vector<CellSet> connected_components(const GridSpace& g, const CellSet& s,
                                          bool eight) {
  std::vector<CellSet> comps;
  CellSet seen(g.cell_count());
  std::vector<int> stack;
  s.for_each([&](int start) {
    if (seen.test(start)) return;
    CellSet comp(g.cell_count());
    stack.clear();
    stack.push_back(start);
    seen.set(start);
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      comp.set(cell);
      const int r = g.row_of(cell), c = g.col_of(cell);
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (!eight && dr != 0 && dc != 0) continue;
          if (!g.in_bounds(r + dr, c + dc)) continue;
          const int next = g.cell_at(r + dr, c + dc);
          if (s.test(next) && !seen.test(next)) {
            seen.set(next);
            stack.push_back(next);
          }
        }
    }
    comps.push_back(std::move(comp));
  });
  return comps;
}

namespace {

// One-dimensional squared distance transform (lower envelope of parabolas).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, int n) {
  static thread_local std::vector<int> v;
  static thread_local std::vector<double> z;
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      s = ((f[q] + q * double(q)) - (f[v[k]] + v[k] * double(v[k]))) /
          (2.0 * q - 2.0 * v[k]);
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - double(v[k]);
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_cell_distances(const GridSpace& g,
                                           const CellSet& src) {
  const int n = g.n;
  std::vector<double> dist(g.cell_count(), kFar);
  if (src.none()) return dist;
  src.for_each([&](int cell) { dist[cell] = 0.0; });

  std::vector<double> col(n), out(n);
  // columns
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) col[r] = dist[g.cell_at(r, c)];
    dt_1d(col, out, n);
    for (int r = 0; r < n; ++r) dist[g.cell_at(r, c)] = out[r];
  }
  // rows
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) col[c] = dist[g.cell_at(r, c)];
    dt_1d(col, out, n);
    for (int c = 0; c < n; ++c) dist[g.cell_at(r, c)] = out[c];
  }
  return dist;
}

Region interior(const Region& r) { return Region::open(r.grid, r.cells); }

Region closure(const Region& r) { return Region::compact(r.grid, r.cells); }

Region complement(const Region& r) {
  return Region(r.grid, r.is_open() ? Kind::Compact : Kind::Open,
                r.cells.complement());
}

std::vector<Region> components(const Region& r) {
  std::vector<Region> out;
  for (auto& cs : connected_components(r.grid, r.cells, r.is_compact()))
    out.emplace_back(r.grid, r.kind, std::move(cs));
  return out;
}

bool contains_point(const Region& r, PointRef p) {
  if (p.cell < 0 || p.cell >= r.grid.cell_count())
    throw ContractViolation("point outside the grid");
  return r.cells.test(p.cell);
}

bool contains_region(const Region& outer, const Region& inner) {
  check_same_grid(outer, inner);
  if (!outer.is_open() || !inner.is_compact())
    throw ContractViolation("contains_region wants an open outer and a compact inner");
  return closure8(outer.grid, inner.cells).is_subset_of(outer.cells);
}

bool region_subset(const Region& inner, const Region& outer) {
  check_same_grid(inner, outer);
  if (inner.is_compact() && outer.is_open())
    return contains_region(outer, inner);
  // compact-in-compact, open-in-open, open-in-compact: cell inclusion
  return inner.cells.is_subset_of(outer.cells);
}

bool continuum_disjoint(const Region& a, const Region& b) {
  check_same_grid(a, b);
  if (a.is_compact() && b.is_compact())
    return !closure8(a.grid, a.cells).intersects(b.cells);
  return !a.cells.intersects(b.cells);
}

bool is_solid(const Region& r) {
  if (r.is_empty()) return false;
  if (connected_components(r.grid, r.cells, r.is_compact()).size() != 1)
    return false;
  const Region comp = complement(r);
  if (comp.is_empty()) return true;  // the whole grid is solid
  return connected_components(comp.grid, comp.cells, comp.is_compact()).size() == 1;
}

Region dilate(const Region& r, double t) {
  if (!(t > 0.0)) throw ContractViolation("dilate: t must be positive");
  if (r.is_empty()) return Region::empty(r.grid, Kind::Open);
  const auto sqd = squared_cell_distances(r.grid, r.cells);
  const double limit = t * r.grid.n;  // cell units
  const double limit2 = limit * limit;
  CellSet out(r.grid.cell_count());
  for (int cell = 0; cell < r.grid.cell_count(); ++cell)
    if (sqd[cell] < limit2) out.set(cell);
  return Region::open(r.grid, out);
}

SandwichResult sandwich(const Region& k, const Region& u) {
  check_same_grid(k, u);
  if (!k.is_compact() || !u.is_open())
    throw ContractViolation("sandwich wants a compact K and an open U");
  if (!contains_region(u, k)) throw std::runtime_error("not nested");
  SandwichResult res;
  CellSet vcells = closure8(k.grid, k.cells) & erode8(u.grid, u.cells);
  res.v = Region::open(k.grid, vcells);
  res.c = Region::compact(k.grid, std::move(vcells));
  if (!k.is_empty() && !contains_region(res.v, k)) {
    // no strictly interpolating layer at this resolution
    res.v = interior(k);
    res.c = k;
    res.degenerate = true;
  }
  return res;
}

}  // namespace topmeas
