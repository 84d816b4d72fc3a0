#include "topmeas/families.hpp"

#include <algorithm>
#include <cmath>

#include "topmeas/integral.hpp"
#include "topmeas/solid.hpp"

namespace topmeas {

double variation_bound(const MeasureFamily& fam) {
  if (fam.members.empty()) throw ContractViolation("empty measure family");
  double m = 0.0;
  for (const auto& mu : fam.members) m = std::max(m, norm_of(mu));
  return m;
}

const char* tightness_mode_name(TightnessMode m) {
  return m == TightnessMode::Absolute ? "absolute" : "classical";
}

std::optional<Region> tightness_witness(const MeasureFamily& fam,
                                        double epsilon, TightnessMode mode) {
  if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (fam.members.empty()) throw ContractViolation("empty measure family");
  const GridSpace g = fam.members.front().grid();

  std::vector<CellSet> panel;
  panel.push_back(CellSet::full(g.cell_count()));
  CellSet er = CellSet::full(g.cell_count());
  for (int j = 0; j < g.n / 2; ++j) {
    er = erode8(g, er);
    if (er.none()) break;
    panel.push_back(er);
  }
  const int stride = std::max(1, g.n / 16);
  const double h = g.cell_width();
  for (int r = 0; r < g.n; r += stride)
    for (int c = 0; c < g.n; c += stride) {
      const int cell = g.cell_at(r, c);
      CellSet single(g.cell_count());
      single.set(cell);
      panel.push_back(single);
      for (double radius : {2.5 * h, 0.12, 0.3})
        panel.push_back(ball_cells(g, cell, radius));
    }
  std::sort(panel.begin(), panel.end(),
            [](const CellSet& a, const CellSet& b) { return a.count() < b.count(); });

  std::vector<double> norms;
  if (mode == TightnessMode::Classical)
    for (const auto& mu : fam.members) norms.push_back(norm_of(mu));

  for (const auto& cells : panel) {
    const Region k = Region::compact(g, cells);
    bool ok = true;
    for (size_t i = 0; i < fam.members.size() && ok; ++i) {
      const double v = fam.members[i](k);
      ok = mode == TightnessMode::Absolute ? v > epsilon
                                           : v > norms[i] - epsilon;
    }
    if (ok) return k;
  }
  return std::nullopt;
}

std::vector<SequenceExperiment> prokhorov_experiment(
    const std::vector<MeasureSequence>& sequences,
    const ProkhorovExperimentConfig& cfg) {
  std::vector<SequenceExperiment> out;
  for (const auto& s : sequences) {
    SequenceExperiment exp;
    exp.name = s.name;

    std::vector<GridFunction> panel = cfg.panel;
    if (panel.empty()) {
      const GridSpace g = s.limit.grid();
      panel = {constant_function(g, 1.0),
               distance_cone(g, {g.cell_at(g.n / 2, g.n / 2)}),
               peak_cone(g, {g.cell_at(g.n / 4, g.n / 4)}, 1.0, 1.0)};
    }

    double sup_norm = 0.0;
    std::vector<std::vector<double>> coords(s.horizon);
    for (int k = 1; k <= s.horizon; ++k) {
      const DtmEvaluator mk = s.member(k);
      sup_norm = std::max(sup_norm, norm_of(mk));
      coords[k - 1].reserve(panel.size());
      for (const auto& f : panel)
        coords[k - 1].push_back(quasi_integral(mk, f));
    }
    exp.variation_sup = sup_norm;
    exp.variation_bounded = sup_norm <= cfg.variation_cap;
    if (!exp.variation_bounded)
      exp.note =
          "variation grows beyond the cap; a weakly fundamental sequence "
          "would have to be uniformly bounded in variation";

    // greedy nearest-cluster: anchor each index in turn and collect all
    // indices whose integral vectors stay within epsilon/2 of the anchor
    auto close = [&](const std::vector<double>& a,
                     const std::vector<double>& b) {
      double d = 0.0;
      for (size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
      return d <= cfg.epsilon / 2.0;
    };
    for (int anchor = 0; anchor < s.horizon && !exp.subsequence_found;
         ++anchor) {
      std::vector<int> cluster;
      for (int k = anchor; k < s.horizon; ++k)
        if (close(coords[anchor], coords[k])) cluster.push_back(k + 1);
      if (static_cast<int>(cluster.size()) >= cfg.min_length) {
        exp.subsequence_found = true;
        exp.subsequence = std::move(cluster);
      }
    }
    out.push_back(std::move(exp));
  }
  return out;
}

}  // namespace topmeas
