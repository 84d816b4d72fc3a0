#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "topmeas/families.hpp"
#include "topmeas/json_io.hpp"
#include "topmeas/scenarios.hpp"

namespace {

using topmeas::json;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

uint64_t default_seed() {
  if (const char* env = std::getenv("QML_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ConfigError("QML_SEED must be an integer");
    }
  }
  return 0;
}

void emit(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  // csv: flatten one level of arrays of flat objects
  auto print_rows = [](const json& rows) {
    if (!rows.is_array() || rows.empty()) return;
    std::vector<std::string> keys;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it)
      if (!it.value().is_structured()) keys.push_back(it.key());
    for (size_t i = 0; i < keys.size(); ++i)
      std::cout << keys[i] << (i + 1 < keys.size() ? "," : "\n");
    for (const auto& row : rows) {
      for (size_t i = 0; i < keys.size(); ++i) {
        const auto& v = row.value(keys[i], json());
        if (v.is_string())
          std::cout << v.get<std::string>();
        else if (!v.is_null())
          std::cout << v.dump();
        std::cout << (i + 1 < keys.size() ? "," : "\n");
      }
    }
  };
  if (j.is_array()) {
    print_rows(j);
  } else if (j.contains("checks")) {
    print_rows(j["checks"]);
  } else if (j.contains("reports")) {
    print_rows(j["reports"]);
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topological and deficient topological measures on discrete grids"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  // axioms
  auto* ax = app.add_subcommand("axioms", "verify the axiom hierarchy");
  std::string ax_input, ax_budget = "sampled";
  int ax_samples = 10000, ax_n = 0;
  uint64_t ax_seed = 0;
  bool ax_seed_set = false;
  ax->add_option("--input", ax_input, "evaluator JSON file")->required();
  ax->add_option("--budget", ax_budget)->check(CLI::IsMember({"exhaustive", "sampled"}));
  ax->add_option("--samples", ax_samples);
  ax->add_option("--n", ax_n, "expected grid size (cross-checked)");
  ax->add_option("--seed", ax_seed)->each([&](const std::string&) { ax_seed_set = true; });

  // integrate
  auto* integ = app.add_subcommand("integrate", "quasi-integral of a function");
  std::string in_measure, in_function;
  integ->add_option("--measure", in_measure)->required();
  integ->add_option("--function", in_function)->required();

  // converge
  auto* conv = app.add_subcommand("converge", "weak-convergence crosscheck");
  std::string conv_file;
  uint64_t conv_seed = 0;
  bool conv_seed_set = false;
  conv->add_option("--scenario", conv_file, "sequence+config JSON")->required();
  conv->add_option("--seed", conv_seed)->each([&](const std::string&) { conv_seed_set = true; });

  // metrics
  auto* met = app.add_subcommand("metrics", "distances between evaluators");
  std::string met_a, met_b, met_metric = "prokhorov", met_family = "structured";
  double met_resolution = 0.0;
  int met_count = 200;
  uint64_t met_seed = 0;
  bool met_seed_set = false;
  met->add_option("--pair", met_a, "first evaluator JSON")->required();
  met->add_option("pair_b", met_b, "second evaluator JSON")->required();
  met->add_option("--metric", met_metric)
      ->check(CLI::IsMember({"prokhorov", "kr", "uniform"}));
  met->add_option("--family", met_family)
      ->check(CLI::IsMember({"exhaustive", "structured", "generated"}));
  met->add_option("--resolution", met_resolution);
  met->add_option("--count", met_count);
  met->add_option("--seed", met_seed)->each([&](const std::string&) { met_seed_set = true; });

  // families
  auto* fam = app.add_subcommand("families", "family diagnostics");
  std::string fam_input, fam_check = "tightness", fam_mode = "classical";
  double fam_epsilon = 0.1;
  fam->add_option("--input", fam_input, "family JSON {\"members\": [...]}")
      ->required();
  fam->add_option("--check", fam_check)
      ->check(CLI::IsMember({"tightness", "variation"}));
  fam->add_option("--epsilon", fam_epsilon);
  fam->add_option("--mode", fam_mode)
      ->check(CLI::IsMember({"classical", "absolute"}));

  // scenario
  auto* scen = app.add_subcommand("scenario", "run or list built-in scenarios");
  auto* scen_run = scen->add_subcommand("run", "run scenarios");
  auto* scen_list = scen->add_subcommand("list", "list built-in ids");
  std::vector<std::string> scen_ids;
  std::string scen_file;
  bool scen_all = false;
  uint64_t scen_seed = 0;
  bool scen_seed_set = false;
  scen_run->add_option("ids", scen_ids, "built-in scenario ids");
  scen_run->add_option("--file", scen_file, "scenario JSON file");
  scen_run->add_flag("--all", scen_all, "run the whole corpus");
  scen_run->add_option("--seed", scen_seed)->each([&](const std::string&) { scen_seed_set = true; });
  scen->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    std::cerr << app.help() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*ax) {
      const json j = load_json(ax_input);
      const topmeas::DtmEvaluator m = topmeas::evaluator_from_json(j);
      if (ax_n > 0 && m.grid().n != ax_n)
        throw ConfigError("--n does not match the evaluator's grid");
      topmeas::Budget budget =
          ax_budget == "exhaustive"
              ? topmeas::Budget::exhaustive()
              : topmeas::Budget::sampled(ax_samples,
                                         ax_seed_set ? ax_seed : default_seed());
      if (ax_budget == "exhaustive" && m.grid().n > 4)
        throw ConfigError("exhaustive budget requires n <= 4");
      json out;
      out["reports"] = json::array();
      for (const auto& rep : topmeas::verify_dtm_axioms(m, budget))
        out["reports"].push_back(topmeas::axiom_report_to_json(rep));
      out["reports"].push_back(
          topmeas::axiom_report_to_json(topmeas::verify_tm(m, budget)));
      out["reports"].push_back(
          topmeas::axiom_report_to_json(topmeas::verify_measure(m, budget)));
      emit(out, format);
      return kExitOk;
    }

    if (*integ) {
      const topmeas::DtmEvaluator m =
          topmeas::evaluator_from_json(load_json(in_measure));
      const topmeas::GridFunction f =
          topmeas::function_from_json(load_json(in_function));
      emit(topmeas::integral_result_to_json(topmeas::integrate(m, f)), format);
      return kExitOk;
    }

    if (*conv) {
      const json j = load_json(conv_file);
      const topmeas::MeasureSequence s =
          topmeas::sequence_from_json(j.at("sequence"));
      const topmeas::TestConfig cfg = topmeas::convergence_config_from_json(
          j.value("config", json::object()), s,
          conv_seed_set ? conv_seed : default_seed());
      emit(topmeas::crosscheck_report_to_json(topmeas::crosscheck(s, cfg)),
           format);
      return kExitOk;
    }

    if (*met) {
      const topmeas::DtmEvaluator a =
          topmeas::evaluator_from_json(load_json(met_a));
      const topmeas::DtmEvaluator b =
          topmeas::evaluator_from_json(load_json(met_b));
      const topmeas::GridSpace g = a.grid();
      const uint64_t seed = met_seed_set ? met_seed : default_seed();
      json out;
      if (met_metric == "prokhorov") {
        const double res =
            met_resolution > 0 ? met_resolution : g.cell_width() / 4.0;
        topmeas::SetFamily family =
            met_family == "exhaustive" ? topmeas::SetFamily::exhaustive(g)
            : met_family == "generated"
                ? topmeas::SetFamily::generated(g, met_count, seed)
                : topmeas::SetFamily::structured(g, std::max(1, g.n / 8));
        const auto r = topmeas::prokhorov(a, b, family, res);
        out = {{"value", r.value},
               {"mode", r.mode},
               {"resolution", r.resolution},
               {"binding_witness", r.binding_witness
                                       ? topmeas::region_to_json(*r.binding_witness)
                                       : json(nullptr)}};
      } else if (met_metric == "kr") {
        std::vector<topmeas::PointRef> anchors{
            {g.cell_at(g.n / 2, g.n / 2)},
            {g.cell_at(g.n / 4, g.n / 4)},
            {g.cell_at(3 * g.n / 4, g.n / 4)}};
        const auto fam_lip = topmeas::LipFamily::cones(g, anchors);
        out = {{"value", topmeas::kr(a, b, fam_lip)},
               {"mode", "family-restricted"},
               {"family_size", fam_lip.functions().size()}};
      } else {
        std::vector<topmeas::GridFunction> panel{
            topmeas::constant_function(g, 1.0),
            topmeas::clamped_distance(g, {g.cell_at(g.n / 2, g.n / 2)}, 0.0,
                                      0.0, 1.0)};
        out = {{"value", topmeas::d_uniform(a, b, panel)},
               {"mode", "family-restricted"}};
      }
      emit(out, format);
      return kExitOk;
    }

    if (*fam) {
      const json j = load_json(fam_input);
      topmeas::MeasureFamily family;
      family.name = j.value("name", "family");
      for (const auto& mj : j.at("members"))
        family.members.push_back(topmeas::evaluator_from_json(mj));
      json out;
      if (fam_check == "variation") {
        out = {{"check", "variation"},
               {"bound", topmeas::variation_bound(family)}};
      } else {
        const auto mode = fam_mode == "classical"
                              ? topmeas::TightnessMode::Classical
                              : topmeas::TightnessMode::Absolute;
        const auto w = topmeas::tightness_witness(family, fam_epsilon, mode);
        out = {{"check", "tightness"},
               {"mode", topmeas::tightness_mode_name(mode)},
               {"epsilon", fam_epsilon},
               {"witness", w ? topmeas::region_to_json(*w) : json(nullptr)}};
      }
      emit(out, format);
      return kExitOk;
    }

    if (*scen) {
      if (*scen_list) {
        emit(json(topmeas::list_builtin()), format);
        return kExitOk;
      }
      std::vector<topmeas::Scenario> to_run;
      const uint64_t seed = scen_seed_set ? scen_seed : default_seed();
      if (scen_all)
        for (const auto& id : topmeas::list_builtin())
          to_run.push_back(topmeas::builtin_scenario(id));
      for (const auto& id : scen_ids)
        to_run.push_back(topmeas::builtin_scenario(id));
      if (!scen_file.empty())
        to_run.push_back(topmeas::scenario_from_json(load_json(scen_file)));
      if (to_run.empty()) throw ConfigError("nothing to run");
      json out = json::array();
      bool all_pass = true;
      for (auto& s : to_run) {
        s.seed = seed;
        const auto rep = topmeas::run_scenario(s);
        all_pass &= rep.pass;
        out.push_back(rep.to_json());
      }
      emit(out, format);
      return all_pass ? kExitOk : kExitAssertion;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const topmeas::ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitConfig;
}
