#include "transportq/cli.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "transportq/config.h"
#include "transportq/errors.h"

namespace transportq {

namespace {

constexpr const char* kCsvHeader =
    "t,psi_norm,unitarity_defect,schrodinger_residual,heisenberg_residual,picture_gap,expectation_re,expectation_im";

void append_number(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  line += buf;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw config_error(path + ": cannot open for writing");
  f << contents;
  if (!f) throw config_error(path + ": write failed");
}

int exit_code_for(const Error& e) { return e.code() == Errc::numerical ? kExitNumerical : kExitValidation; }

int threads_from_env() {
  const char* v = std::getenv("TRANSPORTQ_THREADS");
  if (v == nullptr) return 0;
  const int n = std::atoi(v);
  return n > 0 ? n : 0;
}

}  // namespace

std::string report_csv(const RunReport& report) {
  std::string text = kCsvHeader;
  text += '\n';
  for (const auto& r : report.records) {
    const double fields[] = {r.t,
                             r.psi_norm,
                             r.unitarity_defect,
                             r.schrodinger_residual,
                             r.heisenberg_residual,
                             r.picture_gap,
                             r.expectation.real(),
                             r.expectation.imag()};
    bool first = true;
    for (double v : fields) {
      if (!first) text += ',';
      first = false;
      append_number(text, v);
    }
    text += '\n';
  }
  return text;
}

std::string report_summary_json(const RunReport& report, const Scenario& scenario) {
  const auto& s = report.summary;
  nlohmann::json doc;
  doc["name"] = report.name;
  doc["method"] = to_string(scenario.method);
  doc["steps"] = scenario.steps;
  doc["t_final"] = scenario.t_final;
  doc["sign"] = scenario.path.sign();
  doc["seed"] = scenario.seed;
  doc["records"] = report.records.size();
  nlohmann::json summary;
  summary["max_unitarity_defect"] = s.max_unitarity_defect;
  summary["max_schrodinger_residual"] = scenario.initial_state ? number_or_null(s.max_schrodinger_residual) : nullptr;
  summary["max_heisenberg_residual"] =
      scenario.initial_observable ? number_or_null(s.max_heisenberg_residual) : nullptr;
  summary["max_picture_gap"] =
      scenario.initial_state && scenario.initial_observable ? number_or_null(s.max_picture_gap) : nullptr;
  summary["max_norm_drift"] = scenario.initial_state ? number_or_null(s.max_norm_drift) : nullptr;
  if (s.convergence) {
    summary["convergence_order"] = s.convergence->exact ? nullptr : number_or_null(s.convergence->slope);
    summary["convergence_exact"] = s.convergence->exact;
  } else {
    summary["convergence_order"] = nullptr;
  }
  summary["wall_seconds"] = s.wall_seconds;
  doc["summary"] = std::move(summary);
  return doc.dump(2) + "\n";
}

std::vector<SuiteResult> verify_suite(const std::string& suite, int threads) {
  std::vector<const BuiltinScenario*> selected;
  if (suite == "all") {
    for (const auto& b : builtin_scenarios()) selected.push_back(&b);
  } else {
    selected.push_back(&find_builtin(suite));
  }

  std::vector<SuiteResult> results(selected.size());
  const auto count = static_cast<int>(selected.size());
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int k = 0; k < count; ++k) {
    SuiteResult& r = results[k];
    r.name = selected[k]->name;
    try {
      r.diagnostic = selected[k]->check(selected[k]->make());
      r.passed = r.diagnostic.empty();
    } catch (const std::exception& e) {
      r.diagnostic = e.what();
      r.passed = false;
    }
  }
  return results;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product-integral transport of quantum states and observables", "transportq"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_path;
  std::string json_path;
  auto* run = app.add_subcommand("run", "Run one scenario and write its CSV time series and JSON summary");
  run->add_option("--config", config_path, "Scenario JSON file")->required();
  run->add_option("--csv", csv_path, "CSV output path (overrides the config)");
  run->add_option("--json", json_path, "JSON summary path (overrides the config)");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run built-in scenario oracles");
  verify->add_option("--suite", suite, "conservative | commuting | benchmark | random | all")->required();

  std::string order_config;
  std::vector<int> order_steps;
  std::string order_csv;
  int reference_steps = 0;
  auto* order = app.add_subcommand("order", "Convergence study of a scenario's method");
  order->add_option("--config", order_config, "Scenario JSON file")->required();
  order->add_option("--steps", order_steps, "Comma-separated step counts")->delimiter(',')->required();
  order->add_option("--csv", order_csv, "Output CSV (default <name>_order.csv)");
  order->add_option("--reference-steps", reference_steps, "Reference step count (default 100x the largest)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*run) {
      const ScenarioConfig config = load_config(config_path);
      const Scenario& s = config.scenario;
      const std::string csv = !csv_path.empty() ? csv_path : !config.csv_path.empty() ? config.csv_path : s.name + ".csv";
      const std::string js =
          !json_path.empty() ? json_path : !config.json_path.empty() ? config.json_path : s.name + ".json";
      out << "running '" << s.name << "' (" << to_string(s.method) << ", " << s.steps << " steps)\n";
      const RunReport report = run_scenario(s);
      write_file(csv, report_csv(report));
      write_file(js, report_summary_json(report, s));
      out << "wrote " << csv << " and " << js << "\n";
      return kExitOk;
    }
    if (*verify) {
      const auto results = verify_suite(suite, threads_from_env());
      bool all_passed = true;
      for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
        if (!r.passed) {
          err << r.name << ": " << r.diagnostic << "\n";
          all_passed = false;
        }
      }
      return all_passed ? kExitOk : kExitNumerical;
    }
    if (*order) {
      const ScenarioConfig config = load_config(order_config);
      const Scenario& s = config.scenario;
      ConvergenceOptions options;
      options.reference_steps = reference_steps;
      out << "convergence study of '" << s.name << "' (" << to_string(s.method) << ")\n";
      const ConvergenceResult result = estimate_convergence_order(s, order_steps, options);
      std::string text = "steps,dt,error\n";
      for (std::size_t k = 0; k < result.step_counts.size(); ++k) {
        text += std::to_string(result.step_counts[k]) + ',';
        append_number(text, s.t_final / result.step_counts[k]);
        text += ',';
        append_number(text, result.errors[k]);
        text += '\n';
      }
      const std::string path = order_csv.empty() ? s.name + "_order.csv" : order_csv;
      write_file(path, text);
      if (result.exact) {
        out << "exact: all errors at roundoff level\n";
      } else {
        out << "slope " << result.slope << "\n";
      }
      out << "wrote " << path << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace transportq
