#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "topmeas/grid.hpp"

namespace topmeas {

/// Cell-sampled real function on the grid. Stands in for a continuous
/// function: every formula downstream depends only on its level sets.
struct GridFunction {
  GridSpace grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(GridSpace g, std::vector<double> v)
      : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.cell_count())
      throw ContractViolation("GridFunction: wrong number of cell values");
  }

  double at(int cell) const { return values[cell]; }
  double min_value() const {
    return *std::min_element(values.begin(), values.end());
  }
  double max_value() const {
    return *std::max_element(values.begin(), values.end());
  }
  double sup_norm() const {
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  bool nonnegative() const {
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return v >= 0.0; });
  }

  /// Cells with value > t (for open level regions) or >= t (compact ones).
  CellSet cells_above(double t, bool strict) const {
    CellSet s(grid.cell_count());
    for (int c = 0; c < grid.cell_count(); ++c)
      if (strict ? values[c] > t : values[c] >= t) s.set(c);
    return s;
  }

  GridFunction scaled(double c) const {
    GridFunction f(*this);
    for (double& v : f.values) v *= c;
    return f;
  }
  GridFunction plus(const GridFunction& o) const {
    GridFunction f(*this);
    for (size_t i = 0; i < f.values.size(); ++i) f.values[i] += o.values[i];
    return f;
  }
  GridFunction clamped(double lo, double hi) const {
    GridFunction f(*this);
    for (double& v : f.values) v = std::clamp(v, lo, hi);
    return f;
  }
  GridFunction positive_part() const {
    GridFunction f(*this);
    for (double& v : f.values) v = std::max(v, 0.0);
    return f;
  }
  GridFunction negative_part() const {
    GridFunction f(*this);
    for (double& v : f.values) v = std::max(-v, 0.0);
    return f;
  }
  CellSet support() const { return cells_above(0.0, true) | negative_part().cells_above(0.0, true); }

  /// Exact Lipschitz-1 test w.r.t. center distance (quadratic; small grids).
  bool is_lipschitz1(double tol = 1e-12) const;
};

// --- builders -------------------------------------------------------------

GridFunction constant_function(GridSpace g, double c);

/// Distance from the apex cell center: f(c) = d(c, apex). 1-Lipschitz.
GridFunction distance_cone(GridSpace g, PointRef apex);

/// Downward cone: f(c) = max(0, height - slope * d(c, apex)).
GridFunction peak_cone(GridSpace g, PointRef apex, double height,
                       double slope = 1.0);

/// Upward cup with floor at the apex: f(c) = base + slope * d(c, apex).
GridFunction cup(GridSpace g, PointRef apex, double base, double slope = 1.0);

/// Indicator plateau of a cell set (height on the cells, 0 elsewhere).
GridFunction plateau(GridSpace g, const CellSet& cells, double height = 1.0);

/// clamp(d(., q) - shift, lo, hi); 1-Lipschitz, values within [lo, hi].
GridFunction clamped_distance(GridSpace g, PointRef q, double shift, double lo,
                              double hi);

GridFunction random_function(GridSpace g, std::mt19937_64& rng, double lo = 0.0,
                             double hi = 1.0);

/// Random piecewise-constant function: k rectangular patches of random level.
GridFunction random_piecewise(GridSpace g, std::mt19937_64& rng, int patches,
                              double lo = 0.0, double hi = 1.0);

}  // namespace topmeas
