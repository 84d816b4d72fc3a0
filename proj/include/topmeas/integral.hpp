#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topmeas/function.hpp"
#include "topmeas/measures.hpp"

namespace topmeas {

/// Piecewise-constant function on the reals with finitely many breakpoints.
/// Right-continuous steps carry their value on [b_i, b_{i+1}); left-continuous
/// ones on (b_{i-1}, b_i]. plateaus has one more entry than breakpoints.
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> plateaus;
  bool left_continuous = false;

  double value_at(double t) const;
  /// Breakpoints where the step actually jumps by more than tol; all other
  /// reals are continuity points.
  std::vector<double> discontinuities(double tol = 1e-12) const;
};

/// R1(t) = m(open region of cells with f > t).
StepFunction r1(const DtmEvaluator& m, const GridFunction& f);
/// R2(t) = m(compact region of cells with f >= t).
StepFunction r2(const DtmEvaluator& m, const GridFunction& f);

struct IntegralResult {
  double value = 0.0;     // R1 form of the distribution integral
  double r2_value = 0.0;  // R2 form
  double r2_gap = 0.0;
  bool r2_equal = false;  // gap <= 1e-12
  std::vector<double> breakpoints;
};

/// Quasi-integral of f against m via the distribution functions. Returns the
/// R1 form and reports the R2 form alongside; the two agree whenever every
/// level cell set is an m-continuity set (always, for measure-class
/// evaluators).
IntegralResult integrate(const DtmEvaluator& m, const GridFunction& f);

/// As integrate(), but an R1/R2 gap beyond 1e-9 throws
/// "distribution inconsistency" (an evaluator violating regularity at the
/// function's level sets).
IntegralResult integrate_strict(const DtmEvaluator& m, const GridFunction& f);

inline double quasi_integral(const DtmEvaluator& m, const GridFunction& f) {
  return integrate(m, f).value;
}

/// rho(f) = Q(f+) - Q(f-); the signed-function convention used by the
/// Kantorovich-Rubinstein metric.
double signed_quasi_integral(const DtmEvaluator& m, const GridFunction& f);

struct PropertyCheck {
  std::string property;
  bool pass = true;
  double worst_margin = 0.0;
  long long checks = 0;
  std::string witness;
};

struct DFunctionalReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const;
};

/// Positive homogeneity, monotonicity, orthogonal additivity (8-separated
/// supports), the total-mass bounds, and (for topological measures) the
/// 2|f-g|·m(X) Lipschitz bound. Tolerance 1e-9.
DFunctionalReport dfunctional_suite(const DtmEvaluator& m,
                                    const std::vector<GridFunction>& fs,
                                    bool tm_classified);

struct RoundtripReport {
  double compact_value = 0.0;  // m(K)
  double infimum = 0.0;        // inf over the plateau family of Q(g)
  double gap = 0.0;            // infimum - m(K), >= 0 up to tolerance
  int family_size = 0;
  bool lower_bound_holds = false;
  bool exact = false;  // gap == 0 (asserted when dilation adds nothing)
};

/// Functional-to-measure round trip: the infimum of Q(g) over plateau
/// functions g with g >= 1 on K, 0 <= g <= 1, built from Chebyshev dilations
/// of K at all grid radii, never falls below m(K).
RoundtripReport roundtrip_check(const DtmEvaluator& m, const Region& k);

}  // namespace topmeas
