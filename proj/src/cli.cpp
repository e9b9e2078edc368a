#include "degenlab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "degenlab/config.hpp"
#include "degenlab/studies.hpp"
#include "degenlab/verify.hpp"

namespace dgl {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

nlohmann::json monitor_json(const SolverRun& run) {
  nlohmann::json comps = nlohmann::json::array();
  for (std::size_t i = 0; i < run.monitors.min.size(); ++i)
    comps.push_back({{"component", i + 1},
                     {"min", run.monitors.min[i].value},
                     {"min_node", run.monitors.min[i].node},
                     {"min_t", run.monitors.min[i].t},
                     {"max", run.monitors.max[i].value},
                     {"max_node", run.monitors.max[i].node},
                     {"max_t", run.monitors.max[i].t}});
  return {{"steps", run.steps},
          {"final_time", run.trajectory.times().back()},
          {"levels", run.trajectory.levels()},
          {"components", comps},
          {"max_abs_u", run.monitors.max_total},
          {"max_gradient", run.monitors.max_gradient},
          {"final_energy", run.monitors.energy},
          {"min_dt", run.monitors.dts.empty() ? 0.0 : *std::min_element(run.monitors.dts.begin(), run.monitors.dts.end())}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"degenlab: regularized degenerate parabolic systems lab"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  std::string verify_json;
  auto* verify = app.add_subcommand("verify", "run the property suites and print a pass/fail table");
  verify->add_option("--seed", vopt.seed, "sampling seed");
  verify->add_option("--samples", vopt.samples, "samples per sampled property")->check(CLI::PositiveNumber);
  verify->add_option("--shards", vopt.shards, "sample shards run concurrently")->check(CLI::PositiveNumber);
  verify->add_option("--json", verify_json, "also write the table as JSON");

  std::string config, csv_path, binary_path, monitor_path;
  auto* solve_cmd = app.add_subcommand("solve", "run the regularized solver");
  solve_cmd->add_option("--config", config, "config file")->required();
  solve_cmd->add_option("--csv", csv_path, "write the stored levels as CSV");
  solve_cmd->add_option("--binary", binary_path, "write the stored levels as a binary snapshot");
  solve_cmd->add_option("--monitor", monitor_path, "write the monitor report (default: stdout)");

  std::string kind, report_path;
  int workers = 0;
  auto* study = app.add_subcommand("study", "run a study and print its CSV table");
  study->add_option("kind", kind, "study kind")
      ->required()
      ->check(CLI::IsMember({"eps-convergence", "uniqueness", "gradbound", "maxprinciple", "moser"}));
  study->add_option("--config", config, "config file")->required();
  study->add_option("--csv", csv_path, "write the table here instead of stdout");
  study->add_option("--report", report_path, "write the summary here instead of stderr");
  study->add_option("--workers", workers, "ladder points run concurrently")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*verify) {
      const auto rows = run_verify(vopt);
      out << verify_table(rows);
      bool ok = true;
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) {
        ok = ok && r.ok;
        j.push_back({{"suite", r.suite}, {"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
      }
      if (!verify_json.empty()) write_file(verify_json, j.dump(2) + "\n");
      out << (ok ? "all properties hold\n" : "some properties FAILED\n");
      return ok ? 0 : 1;
    }
    if (*solve_cmd) {
      const Config c = Config::load(config);
      c.require_known(solver_keys());
      const SolverConfig cfg = solver_config(c);
      const SolverRun run = solve(cfg);
      nlohmann::json rep = monitor_json(run);
      bool ok = true;
      if (run.homogeneous) {
        const auto mp = max_principle_monitor(run, run.reference_sup);
        rep["max_principle"] = {{"bound", mp.bound},
                                {"violations", mp.violations},
                                {"worst_excess", mp.worst_excess},
                                {"total_norm_violations", mp.total_norm_violations}};
        ok = mp.violations == 0 && mp.total_norm_violations == 0;
      }
      if (!csv_path.empty()) {
        std::ofstream os(csv_path);
        if (!os) throw std::runtime_error("cannot write " + csv_path);
        write_csv(run.trajectory, os);
      }
      if (!binary_path.empty()) write_binary(run.trajectory, binary_path, run.monitors.dts.empty() ? 0.0 : run.monitors.dts.back(), cfg.T);
      if (monitor_path.empty())
        out << rep.dump(2) << '\n';
      else
        write_file(monitor_path, rep.dump(2) + "\n");
      return ok ? 0 : 1;
    }
    if (*study) {
      const Config c = Config::load(config);
      StudySpec spec = study_spec(c, kind);
      if (workers > 0) spec.workers = workers;
      const StudyResult r = run_study(spec);
      if (csv_path.empty())
        out << r.csv;
      else
        write_file(csv_path, r.csv);
      if (report_path.empty())
        err << r.summary.dump(2) << '\n';
      else
        write_file(report_path, r.summary.dump(2) + "\n");
      return r.ok ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace dgl
