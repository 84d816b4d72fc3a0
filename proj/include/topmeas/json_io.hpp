#pragma once

#include <string>

#include "json.hpp"
#include "topmeas/convergence.hpp"
#include "topmeas/integral.hpp"
#include "topmeas/measures.hpp"
#include "topmeas/metrics.hpp"
#include "topmeas/solid.hpp"

namespace topmeas {

using json = nlohmann::json;

// regions: {"kind": "open"|"compact", "n": int, "cells": [row-major indices]}
json region_to_json(const Region& r);
Region region_from_json(const json& j);

// functions: {"grid_n": int, "values": [...]} or a builder form
// {"type": "cone"|"peak"|"cup"|"constant"|"plateau", ...}
json function_to_json(const GridFunction& f);
GridFunction function_from_json(const json& j);

// evaluators: {"type": "point_mass"|"radon"|"indicator"|"combine"|
//              "solid_extension", "grid_n": int, ...params}
json evaluator_to_json(const DtmEvaluator& m);
DtmEvaluator evaluator_from_json(const json& j);

// solid-set functions: {"type": "nvssf"|"two_point_area", "grid_n": ...}
SolidSetFunction ssf_from_json(const json& j);

json axiom_report_to_json(const AxiomReport& r);
json integral_result_to_json(const IntegralResult& r);
json condition_report_to_json(const ConditionReport& r);
json crosscheck_report_to_json(const CrosscheckReport& r);
json metric_axiom_report_to_json(const MetricAxiomReport& r);
json link_report_to_json(const ConvergenceLinkReport& r);

}  // namespace topmeas
