// ffem: command-line driver for the fractional-order nonlocal beam solver.
//
//   ffem solve    <config>   load-displacement and midspan stress CSVs
//   ffem sweep    <config>   load-displacement curves over the alpha x lf grid
//   ffem converge <config>   mesh convergence table over alpha x lf x n_inf
//   ffem validate            built-in verification runs
//   ffem oracle   <config>   classical (integer-order) reference run
//
// Exit status: 0 success, 1 bad input, 2 a validation check failed, 3 solver failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffem/ffem.hpp"

namespace fs = std::filesystem;
using namespace ffem;

namespace {

enum Exit { kOk = 0, kInput = 1, kValidation = 2, kSolver = 3 };

struct Globals {
  bool verbose = false;
  int threads = 0;  // 0: take the config value
  std::string out;  // empty: take the config value
};

BeamConfig read_config(const std::string& path, const Globals& g) {
  BeamConfig c = path.empty() ? BeamConfig{} : load_config(path);
  if (g.threads > 0) c.threads = g.threads;
  if (!g.out.empty()) c.output_dir = g.out;
  for (const auto& w : c.validate()) std::cerr << "warning: " << w << '\n';
  return c;
}

std::ofstream open_csv(const BeamConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  const fs::path p = fs::path(c.output_dir) / name;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  std::cout << "wrote " << p.string() << '\n';
  return os;
}

ProgressHook progress(const Globals& g, std::string tag = {}) {
  if (!g.verbose) return {};
  auto mu = std::make_shared<std::mutex>();
  return [mu, tag = std::move(tag)](const IterationInfo& i) {
    std::lock_guard<std::mutex> lock(*mu);
    std::cerr << tag << "step " << i.step << " iter " << i.iter << " residual " << i.residual << '\n';
  };
}

int cmd_solve(const std::string& path, const Globals& g) {
  const BeamConfig c = read_config(path, g);
  const SolutionRecord rec = solve(c, progress(g));
  {
    auto os = open_csv(c, "load_displacement.csv");
    write_load_displacement(os, rec);
  }
  const StressProfile p = stress_profile(*rec.basis, c.section(), rec.final().X, 0.5 * c.L, 21, c.linearized);
  const Normalized n = nondimensionalize(c, rec.final().w_mid, c.load_magnitude());
  {
    auto os = open_csv(c, "stress_midspan.csv");
    write_stress(os, c, p, n.q0);
  }
  std::cout << "w_bar(L/2) = " << n.w_bar << " at load_bar = " << n.load_bar << '\n';
  return kOk;
}

int cmd_sweep(const std::string& path, const Globals& g) {
  const BeamConfig c = read_config(path, g);
  struct Job {
    double alpha, lf;
    SolutionRecord rec;
  };
  std::vector<Job> jobs;
  for (double lf : c.lf_ratios)
    for (double a : c.alphas) jobs.push_back({a, lf, {}});
  parallel_for(static_cast<int>(jobs.size()), c.threads, [&](int i) {
    Job& j = jobs[static_cast<std::size_t>(i)];
    BeamConfig ci = c;
    ci.alpha = j.alpha;
    ci.lf_ratio = j.lf;
    ci.threads = 1;
    std::ostringstream tag;
    tag << "[alpha " << j.alpha << " lf " << j.lf << "] ";
    j.rec = solve(ci, progress(g, tag.str()));
  });
  auto os = open_csv(c, "sweep.csv");
  set_csv_precision(os);
  os << "alpha,lf_over_L,elements,load_factor,load_bar,w_bar_mid,iterations\n";
  for (const auto& j : jobs) {
    const double full = j.rec.config.load_magnitude();
    for (const auto& s : j.rec.steps) {
      const Normalized n = nondimensionalize(j.rec.config, s.w_mid, s.load_factor * full);
      os << j.alpha << ',' << j.lf << ',' << j.rec.config.element_count() << ',' << s.load_factor << ','
         << n.load_bar << ',' << n.w_bar << ',' << s.iterations << '\n';
    }
  }
  return kOk;
}

int cmd_converge(const std::string& path, bool calibrate, const Globals& g) {
  const BeamConfig c = read_config(path, g);
  if (c.load_kind != LoadKind::UDL) throw ConfigError("converge: the study uses a uniform load (load.kind = udl)");
  ConvergenceGrid grid;
  grid.alphas = c.alphas;
  grid.lf_ratios = c.lf_ratios;
  grid.n_infs = c.n_infs;
  grid.bc = c.bc;
  grid.basis = c.basis;
  grid.q0 = c.load_magnitude();
  if (calibrate) {
    grid.q0 = calibrate_load(c);
    std::cout << "calibrated q0 = " << grid.q0 << " N/m (q_bar = " << grid.q0 * c.L / c.h << ")\n";
  }
  const ConvergenceTable t = run_convergence(grid, c, c.threads);
  {
    auto os = open_csv(c, "convergence_table.csv");
    write_convergence_table(os, t);
  }
  {
    auto os = open_csv(c, "convergence_long.csv");
    write_convergence_long(os, t);
  }
  return kOk;
}

int cmd_validate(const Globals& g) {
  BeamConfig c;
  if (!g.out.empty()) c.output_dir = g.out;
  const int threads = g.threads > 0 ? g.threads : 1;
  std::vector<ValidationReport> reports = {run_validation_1(kValidationLoad, threads), run_validation_2(10.0, threads),
                                           run_validation_3(threads)};
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.seconds << " s)\n";
    for (const auto& k : r.checks)
      std::cout << "  " << (k.pass ? "ok   " : "FAIL ") << k.name << ": " << k.value << " (limit " << k.limit << ")\n";
    ok = ok && r.passed();
  }
  auto os = open_csv(c, "validation_report.csv");
  write_reports(os, reports);
  return ok ? kOk : kValidation;
}

int cmd_oracle(const std::string& path, const Globals& g) {
  const BeamConfig c = read_config(path, g);
  const ClassicalBeam beam(c.L, c.element_count(), c.section(), c.bc, c.linearized, c.gauss_points);
  NewtonSolver<ClassicalBeam> newton(beam, c.solver, progress(g));
  const auto steps = newton.solve(beam.forces(make_load(c)));
  auto os = open_csv(c, "oracle_load_displacement.csv");
  set_csv_precision(os);
  os << "load_factor,load_bar,w_bar_mid,iterations\n";
  for (const auto& s : steps) {
    const Normalized n = nondimensionalize(c, beam.deflection(s.X, 0.5 * c.L), s.load_factor * c.load_magnitude());
    os << s.load_factor << ',' << n.load_bar << ',' << n.w_bar << ',' << s.iterations << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-order nonlocal von Karman beam solver"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("-v,--verbose", g.verbose, "Log every Newton iteration to stderr");
  app.add_option("-j,--threads", g.threads, "Worker threads (overrides run.threads)")->check(CLI::PositiveNumber);
  app.add_option("-o,--out", g.out, "Output directory (overrides output.dir)");

  std::string path;
  bool calibrate = false;
  auto* solve_cmd = app.add_subcommand("solve", "Single case: load-displacement and midspan stress CSVs");
  solve_cmd->add_option("config", path, "Configuration file")->required()->check(CLI::ExistingFile);
  auto* sweep_cmd = app.add_subcommand("sweep", "Load-displacement curves over study.alphas x study.lf_ratios");
  sweep_cmd->add_option("config", path, "Configuration file")->required()->check(CLI::ExistingFile);
  auto* conv_cmd = app.add_subcommand("converge", "Convergence table over alphas x lf_ratios x n_inf");
  conv_cmd->add_option("config", path, "Configuration file (defaults when omitted)")->check(CLI::ExistingFile);
  conv_cmd->add_flag("--calibrate", calibrate, "Pick the load that gives w_bar = 0.7429 at alpha = 1, lf = L/10, n_inf = 20");
  auto* val_cmd = app.add_subcommand("validate", "Run the built-in verification cases");
  auto* oracle_cmd = app.add_subcommand("oracle", "Classical integer-order reference run");
  oracle_cmd->add_option("config", path, "Configuration file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  try {
    if (*solve_cmd) return cmd_solve(path, g);
    if (*sweep_cmd) return cmd_sweep(path, g);
    if (*conv_cmd) return cmd_converge(path, calibrate, g);
    if (*val_cmd) return cmd_validate(g);
    if (*oracle_cmd) return cmd_oracle(path, g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kInput;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
