#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "topmeas/convergence.hpp"
#include "topmeas/function.hpp"
#include "topmeas/integral.hpp"
#include "topmeas/measures.hpp"

namespace topmeas {

/// Quantifier domain for the Prokhorov estimator. Exhaustive mode (all cell
/// subsets, both kinds) is the ground-truth oracle and is legal for n <= 4;
/// the other modes restrict the quantifier and therefore yield lower bounds.
struct SetFamily {
  enum class Mode { Exhaustive, Structured, Generated };
  Mode mode = Mode::Structured;
  GridSpace grid;
  std::vector<Region> regions;  // empty in exhaustive mode
  uint64_t seed = 0;

  static SetFamily exhaustive(GridSpace g);
  /// Balls on a center sub-lattice (including radius-0 singletons),
  /// row/column half-planes, the whole space; both kinds.
  static SetFamily structured(GridSpace g, int center_stride = 1);
  static SetFamily generated(GridSpace g, int count, uint64_t seed);
};

/// 1-Lipschitz (center metric), sup-norm <= 1 test functions; guarantees are
/// verified at construction.
class LipFamily {
 public:
  void add(GridFunction f);                 // verifies the guarantee (O(N^2))
  void add_clamped_distance(GridSpace g, PointRef q, double shift);
  const std::vector<GridFunction>& functions() const { return fs_; }

  static LipFamily cones(GridSpace g, const std::vector<PointRef>& anchors);

 private:
  std::vector<GridFunction> fs_;
};

/// Panel-restricted uniform distance: max |Qf dmu - Qf dnu| over nonnegative
/// panel functions with sup norm <= 1. A lower bound of the true supremum.
double d_uniform(const DtmEvaluator& mu, const DtmEvaluator& nu,
                 const std::vector<GridFunction>& panel);

struct ProkhorovResult {
  double value = 0.0;
  std::string mode;  // "exhaustive" or "family-restricted"
  double resolution = 0.0;
  std::optional<Region> binding_witness;  // constraint tight just below value
};

/// Smallest t on the grid {res, 2res, ...} with mu(A) <= nu(closure(A^t)) + t
/// and symmetrically, for every A in the family. Reports 0 when the t -> 0+
/// constraint mu(A) <= nu(closure A) (and symmetric) already holds.
ProkhorovResult prokhorov(const DtmEvaluator& mu, const DtmEvaluator& nu,
                          const SetFamily& fam, double resolution);

/// max over the family of |rho_mu(f) - rho_nu(f)| with rho(f) = Q(f+) - Q(f-).
/// A lower bound of the supremum over all of Lip1 with norm <= 1.
double kr(const DtmEvaluator& mu, const DtmEvaluator& nu, const LipFamily& fam);

struct MetricAxiomViolation {
  std::string axiom;
  std::vector<int> indices;
  double amount = 0.0;
};

struct MetricAxiomReport {
  std::vector<MetricAxiomViolation> violations;
  long long checks = 0;
  bool pass() const { return violations.empty(); }
};

using DistanceFn =
    std::function<double(const DtmEvaluator&, const DtmEvaluator&)>;

/// Nonnegativity, symmetry, zero self-distance and the triangle inequality
/// over all pairs/triples from the pool (tolerance 1e-9).
MetricAxiomReport metric_axiom_suite(const DistanceFn& dist,
                                     const std::vector<DtmEvaluator>& pool);

/// Exhaustive-mode identity of indiscernibles: a zero Prokhorov distance
/// forces equal values on every compact region.
MetricAxiomReport prokhorov_identity_check(const std::vector<DtmEvaluator>& pool,
                                           double resolution);

enum class LinkMetric { Prokhorov, KR };

struct ConvergenceLinkConfig {
  double distance_epsilon = 0.02;
  double variation_bound = 10.0;  // KR hypothesis: uniformly bounded norms
  double resolution = 0.0;        // Prokhorov t-grid; 0 = cell_width/4
  int stride = 1;                 // evaluate distances every stride-th index
};

struct ConvergenceLinkReport {
  std::vector<double> distances;  // one per evaluated index
  std::vector<int> indices;
  bool distances_vanish = false;
  double tail_distance = 0.0;
  double fitted_slope = 0.0;  // log-log decay fit over evaluated indices
  bool hypothesis_met = false;
  CrosscheckReport weak_convergence;
  bool all_conditions_converged = false;
};

/// Verifies distance-to-limit -> 0 along the sequence, then runs the
/// Aleksandrov crosscheck. KR requires the uniform variation bound and
/// throws "variation bound missing" when the prefix exceeds it.
ConvergenceLinkReport convergence_link(const MeasureSequence& s,
                                       LinkMetric which, const TestConfig& cfg,
                                       const ConvergenceLinkConfig& link,
                                       const SetFamily* fam = nullptr,
                                       const LipFamily* lip = nullptr);

/// Least-squares slope of log(y) against log(x); pairs with y <= floor are
/// dropped.
double loglog_slope(const std::vector<int>& xs, const std::vector<double>& ys,
                    double floor_value = 1e-15);

}  // namespace topmeas
