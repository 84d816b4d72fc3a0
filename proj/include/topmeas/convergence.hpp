#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "topmeas/function.hpp"
#include "topmeas/integral.hpp"
#include "topmeas/measures.hpp"

namespace topmeas {

/// A sequence of evaluators with a declared limit. Generators are pure
/// functions of the index (1-based), so tails can be re-evaluated freely.
struct MeasureSequence {
  std::string name;
  std::function<DtmEvaluator(int)> member;  // k = 1, 2, ...
  DtmEvaluator limit;
  int horizon = 256;
};

struct TestConfig {
  std::vector<GridFunction> function_panel;
  std::vector<Region> open_panel;
  std::vector<Region> compact_panel;
  double epsilon = 1e-3;
  double tail_fraction = 0.5;  // tail = last ceil(fraction * horizon) indices
  int min_horizon = 8;         // below this everything is inconclusive
};

enum class Verdict { Converged, Violated, Inconclusive };

const char* verdict_name(Verdict v);

struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::Inconclusive;
  double epsilon = 0.0;
  int n_achieving = 0;       // smallest k0 with the condition met for k > k0
  double worst_margin = 0.0; // worst tail breach (positive = violation size)
  std::string witness;       // offending panel item and index, when violated
  std::vector<double> residuals;  // per-index worst residual, 1-based
};

/// m(closure r) and m(interior r) agree within 1e-12.
bool mu_continuity(const DtmEvaluator& m, const Region& r);

/// Aleksandrov condition (1): quasi-integrals along the panel converge.
ConditionReport check_cond_integrals(const MeasureSequence& s,
                                     const TestConfig& cfg);
/// Condition (2): liminf over opens / limsup over compacts, via tail extrema.
ConditionReport check_cond_sets(const MeasureSequence& s,
                                const TestConfig& cfg);
/// Condition (3): set convergence on limit-continuity sets of both panels.
ConditionReport check_cond_continuity_sets(const MeasureSequence& s,
                                           const TestConfig& cfg);
/// Condition (4): R2 and R1 converge at continuity points of the limit's R2.
ConditionReport check_cond_r2(const MeasureSequence& s, const TestConfig& cfg);

/// Compact-carrier variant: total-mass convergence plus the closed-set
/// limsup, with a cross-verdict against the open-set liminf.
struct CompactVariantReport {
  ConditionReport total_mass;
  ConditionReport closed_limsup;
  ConditionReport open_liminf;
  bool cross_verdict_consistent = true;
};
CompactVariantReport compact_space_variant(const MeasureSequence& s,
                                           const TestConfig& cfg);

struct CrosscheckReport {
  std::vector<ConditionReport> conditions;  // the four equivalent conditions
  CompactVariantReport compact_variant;
  bool anomaly = false;  // one condition converged while another was violated
};
CrosscheckReport crosscheck(const MeasureSequence& s, const TestConfig& cfg);

// --- canonical sequences ----------------------------------------------------

/// mu_k = (1/k) * nu_hat + (1 - 1/k) * m, converging weakly to m.
MeasureSequence mixing_sequence(const DtmEvaluator& nu_hat,
                                const DtmEvaluator& m, int horizon);
/// lambda_k = indicator of a connected compact ball shrinking onto a;
/// converges weakly to the point mass at a.
MeasureSequence shrinking_indicator_sequence(GridSpace g, PointRef a,
                                             double initial_radius,
                                             int horizon);
MeasureSequence alternating_sequence(GridSpace g, PointRef a, PointRef b,
                                     int horizon);
MeasureSequence constant_sequence(const DtmEvaluator& m, int horizon);

/// Panels adapted to a limit point: opens containing the full 8-neighborhood
/// of a (the grid cannot represent sub-cell compacts, so rim-touching opens
/// are excluded), compacts on both sides, cups/cones/plateaus anchored at a.
TestConfig panels_around_point(GridSpace g, PointRef a, double epsilon,
                               uint64_t seed);
/// General-purpose panels: balls, bands, random regions and functions.
TestConfig default_panels(GridSpace g, double epsilon, uint64_t seed);

}  // namespace topmeas
