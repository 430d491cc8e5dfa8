// Command-line front end: validate configurations, run single solves,
// parameter sweeps, MPS export, and external-solution import.
//
// Exit codes: 0 success, 1 invalid configuration or malformed input,
// 2 scenario overlay contradiction, 3 missing or unreadable file.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hes/hes.hpp"

namespace {

using hes::HesConfig;
using hes::SignalSet;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitOverlay = 2;
constexpr int kExitIo = 3;

/// FNV-1a over the raw bytes of a file; used to fingerprint inputs in reports.
std::uint64_t fnv1a_file(const std::string& path, std::uint64_t h = 14695981039346656037ull) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hes::IoError("cannot read " + path);
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct CommonArgs {
  std::string config_path;
  std::string signals_dir;
  std::string out_dir = ".";
  std::string overlay_json;
  double tol = 1e-9;
  double scale = 1e-9;
  long max_iter = -1;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_solver_opts = true) {
  cmd->add_option("--config", a.config_path, "configuration JSON file")->required();
  cmd->add_option("--signals-dir", a.signals_dir, "directory for relative signal paths");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--overlay", a.overlay_json,
                  "JSON scenario object replacing the config's scenario section");
  if (with_solver_opts) {
    cmd->add_option("--tol", a.tol, "solver tolerance");
    cmd->add_option("--scale", a.scale, "objective scaling factor");
    cmd->add_option("--max-iter", a.max_iter, "simplex iteration limit (-1 = automatic)");
  }
}

std::string digest_inputs(const CommonArgs& a, const HesConfig& config) {
  std::uint64_t h = fnv1a_file(a.config_path);
  auto add = [&](const std::string& p) {
    if (p.empty()) return;
    const std::string full =
        (p.front() == '/' || a.signals_dir.empty()) ? p : a.signals_dir + "/" + p;
    h = fnv1a_file(full, h);
  };
  add(config.signals.price_e);
  add(config.signals.price_p);
  add(config.signals.price_t);
  add(config.signals.price_fuel);
  add(config.signals.availability);
  return hex64(h);
}

HesConfig load_with_overlay(const CommonArgs& a) {
  HesConfig config = hes::load_config(a.config_path);
  if (!a.overlay_json.empty()) {
    json j;
    try {
      j = json::parse(a.overlay_json);
    } catch (const json::exception& e) {
      throw hes::ParseError(std::string("--overlay: ") + e.what());
    }
    config.scenario = hes::config_from_json(json{{"scenario", j}}).scenario;
  }
  return config;
}

void require_valid(const HesConfig& config) {
  const hes::ValidationReport rep = hes::validate_config(config);
  if (!rep.ok()) {
    for (const auto& v : rep.violations) std::cerr << "invalid: " << v << "\n";
    throw hes::HesError("configuration rejected (" + std::to_string(rep.violations.size()) +
                        " violations)");
  }
}

std::filesystem::path ensure_out(const CommonArgs& a) {
  std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw hes::IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json report_json(const hes::SolveReport& rep, const std::string& digest) {
  return json{{"status", hes::to_string(rep.status)},
              {"objective", rep.objective},
              {"iterations", rep.iterations},
              {"max_primal_residual", rep.max_primal_residual},
              {"max_dual_residual", rep.max_dual_residual},
              {"complementarity_residual", rep.complementarity_residual},
              {"duality_gap", rep.duality_gap},
              {"diagnostic", rep.diagnostic},
              {"input_digest", digest}};
}

json npv_json(const hes::NpvBreakdown& b) {
  return json{{"npv", b.npv},
              {"capital", b.capital},
              {"fixed_om", b.fixed_om},
              {"variable_om", b.variable_om},
              {"fuel", b.fuel},
              {"carbon", b.carbon},
              {"revenue_primary", b.revenue_primary},
              {"revenue_electric", b.revenue_electric},
              {"revenue_tertiary", b.revenue_tertiary}};
}

void write_solution_outputs(const CommonArgs& a, const HesConfig& config,
                            const SignalSet& signals, const hes::SolveReport& rep,
                            const hes::LpProblem& lp, const std::string& digest) {
  const auto dir = ensure_out(a);
  write_json(dir / "report.json", report_json(rep, digest));
  write_json(dir / "timing.json",
             json{{"wall_time_s", rep.wall_time_s}, {"iterations", rep.iterations}});
  if (rep.status != hes::SolveStatus::Optimal &&
      rep.status != hes::SolveStatus::FeasibleUnverified)
    return;
  const hes::Trajectory traj = hes::extract_trajectory(rep, lp, config);
  const hes::MeshSignals ms = hes::prepare_signals(config, signals, lp.mesh);
  hes::write_trajectory_csv(traj, (dir / "trajectory.csv").string());
  hes::write_accounting_csv(hes::energy_accounting(traj, config, ms.prices),
                            (dir / "accounting.csv").string());
  json npv = npv_json(hes::npv_breakdown(traj, config, ms.prices));
  npv["objective"] = rep.objective;
  npv["sigma"] = {traj.sigma[0], traj.sigma[1], traj.sigma[2]};
  write_json(dir / "npv.json", npv);
}

int cmd_validate(const CommonArgs& a) {
  const HesConfig config = load_with_overlay(a);
  const hes::ValidationReport rep = hes::validate_config(config);
  if (rep.ok()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  for (const auto& v : rep.violations) std::cerr << "invalid: " << v << "\n";
  return kExitInvalid;
}

int cmd_run(const CommonArgs& a, const std::string& external_solver) {
  const HesConfig config = load_with_overlay(a);
  require_valid(config);
  const SignalSet signals = hes::load_signals(config, a.signals_dir);
  const std::string digest = digest_inputs(a, config);

  if (!external_solver.empty()) {
    const auto dir = ensure_out(a);
    const std::string mps = (dir / "model.mps").string();
    const std::string names = (dir / "names.csv").string();
    const std::string sol = (dir / "external.sol").string();
    const hes::Mesh mesh = hes::build_mesh(config.horizon.t0, config.horizon.tf, config.horizon.h);
    const hes::MeshSignals ms = hes::prepare_signals(config, signals, mesh);
    hes::LpProblem lp = hes::assemble_lp(config, mesh, ms);
    lp = hes::apply_scenario_overlay(lp, config.scenario, mesh);
    hes::export_mps(lp, mps, names);
    const std::string cmd = external_solver + " " + mps + " " + names + " " + sol;
    if (std::system(cmd.c_str()) != 0)
      throw hes::HesError("external solver failed: " + cmd);
    const hes::SolveReport rep = hes::import_external_solution(lp, sol, names);
    write_solution_outputs(a, config, signals, rep, lp, digest);
    std::cout << hes::to_string(rep.status) << " objective " << rep.objective << "\n";
    return rep.status == hes::SolveStatus::FeasibleUnverified ? kExitOk : kExitInvalid;
  }

  auto [rep, lp] = hes::solve_config(config, signals, a.tol, a.scale, a.max_iter);
  write_solution_outputs(a, config, signals, rep, lp, digest);
  std::cout << hes::to_string(rep.status) << " objective " << rep.objective << "\n";
  return rep.status == hes::SolveStatus::Optimal ? kExitOk : kExitInvalid;
}

int cmd_sweep(const CommonArgs& a, const std::vector<std::string>& axis_specs, int workers) {
  const HesConfig config = load_with_overlay(a);
  require_valid(config);
  const SignalSet signals = hes::load_signals(config, a.signals_dir);
  std::vector<hes::SweepAxis> axes;
  for (const std::string& spec : axis_specs) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos)
      throw hes::ParseError("--axis expects name=v1,v2,...: '" + spec + "'");
    hes::SweepAxis ax;
    ax.name = spec.substr(0, eq);
    std::stringstream ss(spec.substr(eq + 1));
    for (std::string tok; std::getline(ss, tok, ',');) {
      try {
        size_t pos = 0;
        ax.values.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw hes::ParseError("--axis: bad value '" + tok + "' in '" + spec + "'");
      }
    }
    axes.push_back(std::move(ax));
  }
  const hes::SweepResult sr = hes::run_sweep(config, signals, axes, workers, a.tol, a.scale);
  const auto dir = ensure_out(a);
  hes::write_sweep_csv(sr, (dir / "sweep.csv").string());
  std::cout << "swept " << sr.points.size() << " points\n";
  return kExitOk;
}

int cmd_export_mps(const CommonArgs& a) {
  const HesConfig config = load_with_overlay(a);
  require_valid(config);
  const SignalSet signals = hes::load_signals(config, a.signals_dir);
  const hes::Mesh mesh = hes::build_mesh(config.horizon.t0, config.horizon.tf, config.horizon.h);
  const hes::MeshSignals ms = hes::prepare_signals(config, signals, mesh);
  hes::LpProblem lp = hes::assemble_lp(config, mesh, ms);
  lp = hes::apply_scenario_overlay(lp, config.scenario, mesh);
  const auto dir = ensure_out(a);
  hes::export_mps(lp, (dir / "model.mps").string(), (dir / "names.csv").string());
  std::cout << "wrote model.mps and names.csv (" << lp.rows.size() << " rows, " << lp.n_cols
            << " cols)\n";
  return kExitOk;
}

int cmd_import_solution(const CommonArgs& a, const std::string& solution_path) {
  const HesConfig config = load_with_overlay(a);
  require_valid(config);
  const SignalSet signals = hes::load_signals(config, a.signals_dir);
  const std::string digest = digest_inputs(a, config);
  const hes::Mesh mesh = hes::build_mesh(config.horizon.t0, config.horizon.tf, config.horizon.h);
  const hes::MeshSignals ms = hes::prepare_signals(config, signals, mesh);
  hes::LpProblem lp = hes::assemble_lp(config, mesh, ms);
  lp = hes::apply_scenario_overlay(lp, config.scenario, mesh);
  const auto dir = ensure_out(a);
  const std::string names = (dir / "names.csv").string();
  if (!std::filesystem::exists(names))
    hes::export_mps(lp, (dir / "model.mps").string(), names);
  const hes::SolveReport rep = hes::import_external_solution(lp, solution_path, names);
  write_solution_outputs(a, config, signals, rep, lp, digest);
  std::cout << hes::to_string(rep.status) << " objective " << rep.objective << "\n";
  return rep.status == hes::SolveStatus::FeasibleUnverified ? kExitOk : kExitInvalid;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"hybrid energy system capacity-and-dispatch co-design"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string external_solver, solution_path;
  std::vector<std::string> axis_specs;
  int workers = 1;

  CLI::App* validate = app.add_subcommand("validate", "check a configuration file");
  add_common(validate, a, false);

  CLI::App* run = app.add_subcommand("run", "solve one instance and write its outputs");
  add_common(run, a);
  run->add_option("--external-solver", external_solver,
                  "command invoked as '<cmd> <mps> <names> <solution>'");

  CLI::App* sweep = app.add_subcommand("sweep", "solve the cross product of parameter axes");
  add_common(sweep, a);
  sweep->add_option("--axis", axis_specs, "axis as name=v1,v2,... (repeatable)")->required();
  sweep->add_option("--workers", workers, "worker threads");

  CLI::App* exp = app.add_subcommand("export-mps", "write the transcribed LP as MPS");
  add_common(exp, a, false);

  CLI::App* imp = app.add_subcommand("import-solution", "check an external solver's solution");
  add_common(imp, a, false);
  imp->add_option("--solution", solution_path, "external solution file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  if (validate->parsed()) return cmd_validate(a);
  if (run->parsed()) return cmd_run(a, external_solver);
  if (sweep->parsed()) return cmd_sweep(a, axis_specs, workers);
  if (exp->parsed()) return cmd_export_mps(a);
  if (imp->parsed()) return cmd_import_solution(a, solution_path);
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const hes::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hes::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const hes::HesError& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.find("overlay") != std::string::npos || msg.find("override") != std::string::npos)
      return kExitOverlay;
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
