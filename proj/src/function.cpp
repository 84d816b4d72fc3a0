#include "topmeas/function.hpp"

namespace topmeas {

bool GridFunction::is_lipschitz1(double tol) const {
  const int n = grid.cell_count();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (std::abs(values[a] - values[b]) >
          grid.center_distance(a, b) + tol)
        return false;
  return true;
}

GridFunction constant_function(GridSpace g, double c) {
  return GridFunction(g, std::vector<double>(g.cell_count(), c));
}

GridFunction distance_cone(GridSpace g, PointRef apex) {
  std::vector<double> v(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) v[c] = g.center_distance(c, apex.cell);
  return GridFunction(g, std::move(v));
}

GridFunction peak_cone(GridSpace g, PointRef apex, double height, double slope) {
  std::vector<double> v(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c)
    v[c] = std::max(0.0, height - slope * g.center_distance(c, apex.cell));
  return GridFunction(g, std::move(v));
}

GridFunction cup(GridSpace g, PointRef apex, double base, double slope) {
  std::vector<double> v(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c)
    v[c] = base + slope * g.center_distance(c, apex.cell);
  return GridFunction(g, std::move(v));
}

GridFunction plateau(GridSpace g, const CellSet& cells, double height) {
  std::vector<double> v(g.cell_count(), 0.0);
  cells.for_each([&](int c) { v[c] = height; });
  return GridFunction(g, std::move(v));
}

GridFunction clamped_distance(GridSpace g, PointRef q, double shift, double lo,
                              double hi) {
  std::vector<double> v(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c)
    v[c] = std::clamp(g.center_distance(c, q.cell) - shift, lo, hi);
  return GridFunction(g, std::move(v));
}

GridFunction random_function(GridSpace g, std::mt19937_64& rng, double lo,
                             double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(g.cell_count());
  for (double& x : v) x = dist(rng);
  return GridFunction(g, std::move(v));
}

GridFunction random_piecewise(GridSpace g, std::mt19937_64& rng, int patches,
                              double lo, double hi) {
  std::uniform_real_distribution<double> level(lo, hi);
  std::uniform_int_distribution<int> coord(0, g.n - 1);
  std::vector<double> v(g.cell_count(), lo);
  for (int p = 0; p < patches; ++p) {
    int r0 = coord(rng), r1 = coord(rng), c0 = coord(rng), c1 = coord(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    const double h = level(rng);
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c) v[g.cell_at(r, c)] = h;
  }
  return GridFunction(g, std::move(v));
}

}  // namespace topmeas
