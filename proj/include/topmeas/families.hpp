#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topmeas/convergence.hpp"
#include "topmeas/measures.hpp"

namespace topmeas {

struct MeasureFamily {
  std::string name;
  std::vector<DtmEvaluator> members;
};

/// Least admissible uniform variation bound: max over members of their norm.
double variation_bound(const MeasureFamily& fam);

/// "absolute" checks mu(K) > epsilon for every member (the definition's
/// display); "classical" checks mu(K) > |mu| - epsilon (the complement form
/// used in the compactness argument). Reports always name the mode.
enum class TightnessMode { Absolute, Classical };

const char* tightness_mode_name(TightnessMode m);

/// Smallest-area compact from a structured panel (whole grid, erosions,
/// balls, singletons) satisfying the chosen inequality for every member;
/// none when no panel set qualifies.
std::optional<Region> tightness_witness(const MeasureFamily& fam, double epsilon,
                                        TightnessMode mode);

struct SequenceExperiment {
  std::string name;
  bool variation_bounded = false;
  double variation_sup = 0.0;
  bool subsequence_found = false;
  std::vector<int> subsequence;  // indices, when found
  std::string note;
};

struct ProkhorovExperimentConfig {
  double epsilon = 0.05;
  double variation_cap = 16.0;  // evidence threshold for "unbounded"
  int min_length = 8;           // shortest subsequence worth reporting
  std::vector<GridFunction> panel;  // integral coordinates; default built
  uint64_t seed = 0;
};

/// Desk-scale evidence for the compactness theorem: bounded-variation
/// sequences should contain an integral-Cauchy subsequence (greedy
/// nearest-cluster search over the panel integral vectors). Evidence-grade,
/// not proof-grade.
std::vector<SequenceExperiment> prokhorov_experiment(
    const std::vector<MeasureSequence>& sequences,
    const ProkhorovExperimentConfig& cfg);

}  // namespace topmeas
