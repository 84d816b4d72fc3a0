#include "topmeas/json_io.hpp"

namespace topmeas {

json region_to_json(const Region& r) {
  return json{{"kind", kind_name(r.kind)},
              {"n", r.grid.n},
              {"cells", r.cells.to_indices()}};
}

Region region_from_json(const json& j) {
  const GridSpace g(j.at("n").get<int>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "open" && kind != "compact")
    throw ContractViolation("region kind must be open or compact");
  CellSet cells(g.cell_count());
  for (const auto& c : j.at("cells")) {
    const int idx = c.get<int>();
    if (idx < 0 || idx >= g.cell_count())
      throw ContractViolation("region cell index out of range");
    cells.set(idx);
  }
  return Region(g, kind == "open" ? Kind::Open : Kind::Compact,
                std::move(cells));
}

json function_to_json(const GridFunction& f) {
  return json{{"grid_n", f.grid.n}, {"values", f.values}};
}

GridFunction function_from_json(const json& j) {
  const GridSpace g(j.at("grid_n").get<int>());
  if (j.contains("values")) {
    auto vals = j.at("values").get<std::vector<double>>();
    return GridFunction(g, std::move(vals));
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") return constant_function(g, j.at("value").get<double>());
  if (type == "cone") return distance_cone(g, {j.at("apex").get<int>()});
  if (type == "peak")
    return peak_cone(g, {j.at("apex").get<int>()},
                     j.value("height", 1.0), j.value("slope", 1.0));
  if (type == "cup")
    return cup(g, {j.at("apex").get<int>()}, j.value("base", 0.0),
               j.value("slope", 1.0));
  if (type == "plateau") {
    CellSet cells(g.cell_count());
    for (const auto& c : j.at("cells")) cells.set(c.get<int>());
    return plateau(g, cells, j.value("height", 1.0));
  }
  throw ContractViolation("unknown function type: " + type);
}

SolidSetFunction ssf_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  const GridSpace g(j.at("grid_n").get<int>());
  if (type == "nvssf") {
    std::vector<PointRef> pts;
    for (const auto& p : j.at("points")) pts.push_back({p.get<int>()});
    return nvssf(g, std::move(pts), j.at("n").get<int>());
  }
  if (type == "two_point_area") {
    const auto& pts = j.at("points");
    if (pts.size() != 2)
      throw ContractViolation("two_point_area needs exactly two points");
    return two_point_area(g, {pts[0].get<int>()}, {pts[1].get<int>()});
  }
  throw ContractViolation("unknown solid-set function type: " + type);
}

json evaluator_to_json(const DtmEvaluator& m) { return m.descriptor(); }

DtmEvaluator evaluator_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "point_mass") {
    const GridSpace g(j.at("grid_n").get<int>());
    return point_mass(g, {j.at("cell").get<int>()});
  }
  if (type == "radon") {
    const GridSpace g(j.at("grid_n").get<int>());
    return radon_from_weights(g, j.at("weights").get<std::vector<double>>());
  }
  if (type == "indicator") {
    const GridSpace g(j.at("grid_n").get<int>());
    CellSet cells(g.cell_count());
    for (const auto& c : j.at("cells")) cells.set(c.get<int>());
    return indicator_dtm(Region::compact(g, std::move(cells)));
  }
  if (type == "combine") {
    std::vector<std::pair<double, DtmEvaluator>> terms;
    for (const auto& t : j.at("terms"))
      terms.emplace_back(t.at("coef").get<double>(),
                         evaluator_from_json(t.at("m")));
    return combine(std::move(terms));
  }
  if (type == "solid_extension") return extend(ssf_from_json(j.at("ssf")));
  throw ContractViolation("unknown evaluator type: " + type);
}

namespace {

json witness_to_json(const std::optional<RegionWitness>& w) {
  if (!w) return nullptr;
  json out{{"note", w->note}};
  out["regions"] = json::array();
  for (const auto& r : w->regions) out["regions"].push_back(region_to_json(r));
  return out;
}

}  // namespace

json axiom_report_to_json(const AxiomReport& r) {
  return json{{"axiom", r.axiom},
              {"verdict", r.pass ? "pass" : "fail"},
              {"witness", witness_to_json(r.witness)},
              {"margin", r.margin},
              {"sets_checked", r.sets_checked},
              {"seed", r.seed}};
}

json integral_result_to_json(const IntegralResult& r) {
  return json{{"value", r.value},
              {"r1_breakpoints", r.breakpoints},
              {"r2_equal", r.r2_equal},
              {"r2_gap", r.r2_gap}};
}

json condition_report_to_json(const ConditionReport& r) {
  return json{{"condition", r.condition},
              {"verdict", verdict_name(r.verdict)},
              {"epsilon", r.epsilon},
              {"n_achieving", r.n_achieving},
              {"worst_margin", r.worst_margin},
              {"witness", r.witness}};
}

json crosscheck_report_to_json(const CrosscheckReport& r) {
  json out;
  out["conditions"] = json::array();
  for (const auto& c : r.conditions)
    out["conditions"].push_back(condition_report_to_json(c));
  out["compact_variant"] = {
      {"total_mass", condition_report_to_json(r.compact_variant.total_mass)},
      {"closed_limsup",
       condition_report_to_json(r.compact_variant.closed_limsup)},
      {"open_liminf", condition_report_to_json(r.compact_variant.open_liminf)},
      {"cross_verdict_consistent", r.compact_variant.cross_verdict_consistent}};
  out["anomaly"] = r.anomaly;
  return out;
}

json metric_axiom_report_to_json(const MetricAxiomReport& r) {
  json out{{"checks", r.checks}, {"verdict", r.pass() ? "pass" : "fail"}};
  out["violations"] = json::array();
  for (const auto& v : r.violations)
    out["violations"].push_back(
        {{"axiom", v.axiom}, {"indices", v.indices}, {"amount", v.amount}});
  return out;
}

json link_report_to_json(const ConvergenceLinkReport& r) {
  return json{{"indices", r.indices},
              {"distances", r.distances},
              {"tail_distance", r.tail_distance},
              {"fitted_slope", r.fitted_slope},
              {"distances_vanish", r.distances_vanish},
              {"hypothesis_met", r.hypothesis_met},
              {"all_conditions_converged", r.all_conditions_converged},
              {"weak_convergence", crosscheck_report_to_json(r.weak_convergence)}};
}

}  // namespace topmeas
