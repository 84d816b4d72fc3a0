#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "topmeas/function.hpp"
#include "topmeas/measures.hpp"

namespace topmeas {

struct ExtensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Set function defined exactly on solid regions (connected with connected
/// complement), in both kinds. value(empty) = 0 by convention.
class SolidSetFunction {
 public:
  using Fn = std::function<double(const Region&)>;

  SolidSetFunction() = default;
  SolidSetFunction(std::string name, GridSpace grid, Fn fn,
                   nlohmann::json descriptor)
      : name_(std::move(name)),
        grid_(grid),
        fn_(std::move(fn)),
        descriptor_(std::move(descriptor)) {}

  double value(const Region& r) const {
    if (r.grid != grid_) throw ContractViolation("ssf: grid mismatch");
    if (r.is_empty()) return 0.0;
    if (!is_solid(r))
      throw ContractViolation("solid-set function applied to a non-solid region");
    return fn_(r);
  }
  double whole_space_value() const {
    return value(Region::whole(grid_, Kind::Compact));
  }

  const std::string& name() const { return name_; }
  const GridSpace& grid() const { return grid_; }
  const nlohmann::json& descriptor() const { return descriptor_; }

 private:
  std::string name_;
  GridSpace grid_;
  Fn fn_;
  nlohmann::json descriptor_;
};

/// value(A) = floor(|A ∩ P| / 2) / n for a set P of 2n+1 distinct points.
SolidSetFunction nvssf(GridSpace g, std::vector<PointRef> points, int n);

/// Two distinguished points; value(A) = 0, area(A), or 2*area(A) according to
/// |A ∩ P| = 0, 1, 2. The area is the cell-area sum (an optional per-cell
/// density overrides it).
SolidSetFunction two_point_area(GridSpace g, PointRef p1, PointRef p2,
                                std::vector<double> density = {});

/// Extension to an evaluator on all regions via complement components:
///   eval(compact K)  = sum over 8-components C of K of
///                      [value(X) - sum over 4-components U of the
///                       complement of C of value(U)]
///   eval(open U)     = value(X) - eval(compact complement of U)
/// Complement components are checked solid before value() is applied;
/// a non-solid argument raises ExtensionError ("extension inapplicable").
/// Per-region results are memoized behind an internal synchronized cache.
DtmEvaluator extend(const SolidSetFunction& ssf);

/// Axiom battery restricted to the function's native domain: monotonicity,
/// superadditivity and regularity surrogates over solid regions, plus the
/// (vacuously satisfied) additivity over disjoint solid compacts with solid
/// union. Exhaustive only (n <= 4).
std::vector<AxiomReport> verify_on_solid_domain(const SolidSetFunction& ssf);

struct NonlinearityWitness {
  GridFunction f, g;
  double gap = 0.0;
};

struct NonlinearitySearch {
  int random_candidates = 8;
  uint64_t seed = 0;
  double threshold = 1e-6;
  std::vector<int> focus_cells;  // extra apex cells; evaluator metadata points
                                 // are picked up automatically
};

/// Search for f, g >= 0 with Q(f+g) != Q(f) + Q(g) over cones, plateaus and
/// random piecewise candidates. none means the search stayed below the
/// threshold.
std::optional<NonlinearityWitness> nonlinearity_witness(
    const DtmEvaluator& m, const NonlinearitySearch& cfg = {});

// geometry helpers shared by scenarios and panels
CellSet ball_cells(const GridSpace& g, int center_cell, double radius);
CellSet segment_tube_cells(const GridSpace& g, int cell_a, int cell_b,
                           double radius);

}  // namespace topmeas
