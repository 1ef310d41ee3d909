#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "seqdist/analysis.hpp"
#include "seqdist/calibration.hpp"
#include "seqdist/errors.hpp"
#include "seqdist/harness.hpp"

namespace seqdist::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

struct RunArgs {
  std::string spec_file;
  std::vector<std::string> settings;
  std::string out;
  std::string trajectory_out;
};

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  std::string text = a.spec_file.empty() ? std::string() : read_file(a.spec_file);
  for (const auto& s : a.settings) text += "\n" + s;
  if (const char* env = std::getenv("SEQDIST_SEED"); env && *env) text += std::string("\nseed=") + env;
  if (!a.trajectory_out.empty()) text += "\ntrajectory=true";

  ExperimentSpec spec;
  try {
    spec = parse_spec(text);
  } catch (const SpecError& e) {
    err << e.what() << '\n';
    return kExitInvalidSpec;
  }

  const auto records = run_trials(spec);
  if (a.out.empty()) {
    write_csv(out, records);
  } else {
    auto os = open_out(a.out);
    write_csv(os, records);
    finish(os, a.out);
  }
  if (!a.trajectory_out.empty()) {
    auto os = open_out(a.trajectory_out);
    write_trajectories(os, records);
    finish(os, a.trajectory_out);
  }
  (a.out.empty() ? err : out) << render_groups(summarize(records));
  return kExitOk;
}

struct CalibrateArgs {
  CalibrationGrid grid;
  std::string out;
  bool validate = false;
};

int do_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  CalibrationResult result;
  try {
    result = calibrate_constants(a.grid);
  } catch (const CalibrationError& e) {
    err << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const DomainError& e) {
    err << e.what() << '\n';
    return kExitInvalidSpec;
  }
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  if (a.out.empty()) {
    write_calibration(out, result);
  } else {
    auto os = open_out(a.out);
    write_calibration(os, result);
    finish(os, a.out);
  }
  out << "c_small=" << format_real(result.constants.c_small) << " C_big=" << format_real(result.constants.C_big)
      << " C_unif=" << format_real(result.constants.C_unif) << '\n';
  if (a.validate) {
    CalibrationGrid held_out = a.grid;
    held_out.seed = a.grid.seed + 1;
    const auto v = validate_constants(result.constants, held_out);
    out << "held-out: " << v.violations << " of " << v.far_cells << " far cells violate the floor\n";
  }
  return kExitOk;
}

int do_summarize(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  const auto parsed = read_csv(in);
  for (const auto& issue : parsed.issues) err << path << ':' << issue.line << ": " << issue.message << '\n';
  const auto groups = summarize(parsed.records);
  out << render_groups(groups);
  const auto configs = implied_tables(groups);
  if (!configs.empty()) {
    const auto measurements = to_measurements(groups);
    out << '\n' << render_text(table_summary(configs, measurements));
  }
  return kExitOk;
}

struct BoundsArgs {
  std::string mode;
  std::size_t n = 2;
  double eps = 0.1;
  double delta = 0.05;
  double d = 0.0;
  std::size_t b_opt = 1;
  std::string problem = "closeness";
  double C_big = kCalibratedConstants.C_big;
  double c_small = kCalibratedConstants.c_small;
};

int do_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.mode == "table1" || a.mode == "table2") {
    TableConfig c;
    c.table = a.mode == "table1" ? 1 : 2;
    c.n = a.n;
    c.eps = a.eps;
    c.delta = a.delta;
    c.d = a.d;
    c.b_opt = a.b_opt;
    const TableConfig configs[] = {c};
    out << render_csv(table_summary(configs, {}));
    return kExitOk;
  }
  const WorstCase wc = a.problem == "uniform"  ? WorstCase::Uniform
                       : a.problem == "neq"    ? WorstCase::EqualVsDifferent
                                               : WorstCase::Closeness;
  out << "setting,formula,value,multiplier,symbolic_constant,leading_term_only,n,delta,d\n";
  for (const auto& r : worst_case_lower_general(wc, a.n, a.delta, a.d)) {
    out << r.setting << ',' << r.formula_id << ',' << format_real(r.leading_value) << ','
        << format_real(r.multiplier) << ',' << (r.symbolic_constant ? "true" : "false") << ','
        << (r.leading_term_only ? "true" : "false") << ',' << r.n << ',' << format_real(r.delta) << ','
        << format_real(r.d) << '\n';
  }
  if (a.d > 0.0) {
    ThresholdParams p;
    p.n = a.n;
    p.delta = a.delta;
    p.C_big = a.C_big;
    p.c_small = a.c_small;
    out << "upper/z-tester,n_eta," << format_real(n_eta(p, a.d)) << ",1,false,false," << a.n << ','
        << format_real(a.delta) << ',' << format_real(a.d) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential identity and closeness testing experiments", "seqdist"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run seeded Monte-Carlo trials and write one CSV row per trial");
  run_cmd->add_option("--spec", run.spec_file, "key=value spec file");
  run_cmd->add_option("settings", run.settings, "inline key=value settings, applied after the file");
  run_cmd->add_option("--out", run.out, "results CSV (default: stdout)");
  run_cmd->add_option("--trajectory-out", run.trajectory_out, "per-step statistic and thresholds CSV");

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Estimate c_small, C_big and C_unif by simulation");
  cal_cmd->add_option("--out", cal.out, "per-cell measurements (default: stdout)");
  cal_cmd->add_option("--n", cal.grid.ns, "alphabet sizes (even)")->delimiter(',');
  cal_cmd->add_option("--d", cal.grid.ds, "distances of the far pairs")->delimiter(',');
  cal_cmd->add_option("--t", cal.grid.ts, "checkpoints")->delimiter(',');
  cal_cmd->add_option("--trials", cal.grid.trials, "trials per cell");
  cal_cmd->add_option("--seed", cal.grid.seed, "master seed");
  cal_cmd->add_flag("--validate", cal.validate, "re-check the fitted floor on a held-out seed");

  std::string summary_in;
  auto* sum_cmd = app.add_subcommand("summarize", "Aggregate a results CSV");
  sum_cmd->add_option("--in", summary_in, "results CSV")->required();

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate closed-form sample-complexity expressions");
  bounds_cmd->add_option("--mode", bounds.mode)->required()->check(CLI::IsMember({"table1", "table2", "general"}));
  bounds_cmd->add_option("--n", bounds.n);
  bounds_cmd->add_option("--eps", bounds.eps);
  bounds_cmd->add_option("--delta", bounds.delta);
  bounds_cmd->add_option("--d", bounds.d, "true distance (table rows for tau_2, general bounds)");
  bounds_cmd->add_option("--b-opt", bounds.b_opt);
  bounds_cmd->add_option("--problem", bounds.problem, "general mode: uniform | closeness | neq")
      ->check(CLI::IsMember({"uniform", "closeness", "neq"}));
  bounds_cmd->add_option("--C-big", bounds.C_big);
  bounds_cmd->add_option("--c-small", bounds.c_small);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInvalidSpec;
  }

  try {
    if (*run_cmd) return do_run(run, out, err);
    if (*cal_cmd) return do_calibrate(cal, out, err);
    if (*sum_cmd) return do_summarize(summary_in, out, err);
    return do_bounds(bounds, out);
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kExitIo;
  } catch (const SpecError& e) {
    err << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const DomainError& e) {
    err << e.what() << '\n';
    return kExitInvalidSpec;
  }
}

}  // namespace seqdist::cli
