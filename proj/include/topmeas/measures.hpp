#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "topmeas/grid.hpp"

namespace topmeas {

inline constexpr double kAxiomTol = 1e-9;

/// A finite deficient-topological-measure evaluator: a monotone set function
/// on open and compact regions with eval(empty) = 0 and a finite total.
/// Immutable after construction; safe for concurrent evaluation.
class DtmEvaluator {
 public:
  using Fn = std::function<double(const Region&)>;

  DtmEvaluator() = default;
  DtmEvaluator(std::string name, GridSpace grid, Fn fn,
               nlohmann::json descriptor)
      : name_(std::move(name)),
        grid_(grid),
        fn_(std::move(fn)),
        descriptor_(std::move(descriptor)) {}

  double operator()(const Region& r) const {
    if (r.grid != grid_)
      throw ContractViolation("evaluator applied to a region on another grid");
    return fn_(r);
  }

  const std::string& name() const { return name_; }
  const GridSpace& grid() const { return grid_; }
  const nlohmann::json& descriptor() const { return descriptor_; }
  bool valid() const { return static_cast<bool>(fn_); }

 private:
  std::string name_;
  GridSpace grid_;
  Fn fn_;
  nlohmann::json descriptor_;
};

// --- constructors ----------------------------------------------------------

DtmEvaluator point_mass(GridSpace g, PointRef a);
DtmEvaluator radon_from_weights(GridSpace g, std::vector<double> weights);
DtmEvaluator uniform_radon(GridSpace g);  // total mass 1
/// value 1 exactly on regions containing the connected compact D.
DtmEvaluator indicator_dtm(const Region& d);
DtmEvaluator combine(std::vector<std::pair<double, DtmEvaluator>> terms);

double norm_of(const DtmEvaluator& m);
/// Necessary condition for properness: every single cell gets value 0.
bool annihilates_points(const DtmEvaluator& m);

// --- verification ------------------------------------------------------

struct Budget {
  enum class Mode { Exhaustive, Sampled };
  Mode mode = Mode::Sampled;
  int samples = 10000;
  uint64_t seed = 0;

  static Budget exhaustive() { return {Mode::Exhaustive, 0, 0}; }
  static Budget sampled(int count = 10000, uint64_t seed = 0) {
    return {Mode::Sampled, count, seed};
  }
};

struct RegionWitness {
  std::vector<Region> regions;
  std::string note;
};

struct AxiomReport {
  std::string axiom;
  bool pass = true;
  std::optional<RegionWitness> witness;
  double margin = 0.0;  // worst signed slack; negative beyond tolerance fails
  long long sets_checked = 0;
  uint64_t seed = 0;
};

/// Additivity on disjoint compacts, inner/outer regularity surrogates,
/// monotonicity, and pair/k-family superadditivity. Exhaustive mode
/// enumerates every cell subset in both kinds and is legal only for n <= 4.
std::vector<AxiomReport> verify_dtm_axioms(const DtmEvaluator& m,
                                           const Budget& budget);

/// Compact-splitting criterion: value(X) <= value(C) + value(X minus C)
/// for compact C. Passing classifies the evaluator as a topological measure
/// at this budget.
AxiomReport verify_tm(const DtmEvaluator& m, const Budget& budget);

/// Subadditivity on compact pairs and open pairs; passing classifies the
/// evaluator as extendable to a measure at this budget.
AxiomReport verify_measure(const DtmEvaluator& m, const Budget& budget);

bool all_pass(const std::vector<AxiomReport>& reports);

}  // namespace topmeas
