// porofem: command line driver for the consolidation solver.
//
//   porofem <subcommand> [--config file] [--out dir] [--theta 0|1] [--h list] [--dt value]
//
// Exit status: 0 success, 2 a threshold check failed, 1 runtime error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "porofem/bench.hpp"
#include "porofem/config.hpp"
#include "porofem/criteria.hpp"
#include "porofem/output.hpp"
#include "porofem/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace porofem;

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kThresholdFailure = 2;

struct Options {
  std::string config_path;
  std::string out;
  std::string theta;
  std::string h;
  std::string dt;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig load(const std::string& experiment, const Options& o) {
  RawConfig raw = o.config_path.empty() ? RawConfig{} : parse_raw_config(read_file(o.config_path));
  if (auto it = raw.run.find("experiment"); it != raw.run.end() && it->second != experiment) {
    throw ConfigError(raw.lines["experiment"], "config is for '" + it->second + "', not '" + experiment + "'");
  }
  raw.run["experiment"] = experiment;
  if (!o.out.empty()) raw.run["out"] = o.out;
  if (!o.theta.empty()) raw.run["theta"] = o.theta;
  if (!o.h.empty()) raw.run["h"] = o.h;
  if (!o.dt.empty()) raw.run["dt"] = o.dt;
  return resolve_config(raw);
}

std::string path_in(const RunConfig& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

template <class Writer>
std::string write_csv(const RunConfig& c, const std::string& name, Writer&& w) {
  std::ostringstream os;
  w(os);
  const std::string path = path_in(c, name);
  write_text_file(path, os.str());
  return path;
}

json verdict_json(const Verdict& v) { return {{"pass", v.pass}, {"detail", v.detail}}; }

int finish(const RunConfig& c, json summary, const Verdict& v) {
  summary["experiment"] = to_string(c.experiment);
  summary["case"] = to_string(c.case_id);
  summary["theta"] = c.theta;
  summary["config"] = emit_config(c);
  summary["verdict"] = verdict_json(v);
  write_text_file(path_in(c, "summary.json"), summary.dump(2) + "\n");
  std::cout << (v.pass ? "PASS " : "FAIL ") << to_string(c.experiment) << ": " << v.detail << "\n";
  return v.pass ? kOk : kThresholdFailure;
}

void warn_theta0(const RunConfig& c, const Material& m, double h) {
  if (c.theta != 0) return;
  const std::string w = theta0_guard_warning(m, h, c.dt);
  if (!w.empty()) std::cerr << "warning: " << w << "\n";
}

bool params_overridden_for_exact(const RunConfig& c) {
  return !c.params.empty() && (c.case_id == CaseId::Test1 || c.case_id == CaseId::Test2);
}

int converge_space(const RunConfig& c) {
  const ProblemCase pc = make_case(c);
  if (!pc.exact) throw std::runtime_error("case '" + pc.name + "' has no exact solution");
  if (params_overridden_for_exact(c)) std::cerr << "warning: parameter overrides do not update the manufactured sources\n";
  const ConvergenceReport r = spatial_convergence(pc, c.h_list, c.scheme());
  json s;
  s["tau_csv"] = write_csv(c, "tau.csv", [&](std::ostream& o) { write_tau_table(o, r); });
  s["p_csv"] = write_csv(c, "p.csv", [&](std::ostream& o) { write_p_table(o, r); });
  for (const auto& row : r.rows) {
    s["rows"].push_back({{"h", row.h},
                         {"tau_l2", row.errors.tau_l2},
                         {"tau_h1", row.errors.tau_h1},
                         {"p_l2", row.errors.p_l2},
                         {"p_h1", row.errors.p_h1}});
  }
  return finish(c, s, check_spatial_rates(r));
}

int converge_time(const RunConfig& c) {
  const ProblemCase pc = make_case(c);
  if (c.h_list.size() != 1) throw std::runtime_error("converge-time uses a single mesh size");
  const int n = static_cast<int>(std::lround(pc.domain.width() / c.h_list.front()));
  const auto rows = temporal_ratio(pc, n, c.dt_list, c.scheme());
  json s;
  s["csv"] = write_csv(c, "temporal.csv", [&](std::ostream& o) { write_temporal_table(o, rows); });
  return finish(c, s, check_temporal(rows, true));
}

int energy_or_mass(const RunConfig& c, bool energy) {
  const ProblemCase pc = make_case(c);
  const Mesh mesh = mesh_for(pc, c.h_list.front());
  const Stepper st(pc, mesh, c.scheme());
  warn_theta0(c, st.material(), mesh.cell_size());
  const auto traj = st.trajectory(energy ? st.consistent_initial_state() : st.initial_state());
  json s;
  if (energy) {
    const EnergyLedger L = energy_ledger(st, traj);
    s["csv"] = write_csv(c, "energy.csv", [&](std::ostream& o) { write_energy_table(o, L, c.dt); });
    s["J0"] = L.J.front();
    return finish(c, s, check_energy(L, c.theta));
  }
  const auto r = mass_balance(st, traj);
  s["csv"] = write_csv(c, "mass.csv", [&](std::ostream& o) { write_mass_table(o, r, c.dt); });
  return finish(c, s, check_mass(r, c.dt));
}

int infsup(const RunConfig& c) {
  const ProblemCase pc = make_case(c);
  std::vector<std::pair<double, double>> rows;
  std::vector<double> betas;
  InfSupOptions opts;
  opts.clamp_boundary = true;
  for (double h : c.h_list) {
    const double b = infsup_estimate(mesh_for(pc, h), opts);
    rows.emplace_back(h, b);
    betas.push_back(b);
  }
  json s;
  s["csv"] = write_csv(c, "infsup.csv", [&](std::ostream& o) { write_infsup_table(o, rows); });
  return finish(c, s, check_infsup(betas));
}

int benchmark(const RunConfig& c) {
  BenchmarkCase bc = c.experiment == Experiment::BenchFooting ? build_footing_case() : build_locking_case();
  bc.problem = make_case(c);
  bc.h = c.h_list.front();
  bc.dt = c.dt;
  const Comparison cmp = compare_formulations(bc, c.theta);
  const Mesh mesh = mesh_for(bc.problem, bc.h);
  json s;
  s["profile_csv"] = write_csv(c, "profile.csv", [&](std::ostream& o) {
    write_profile_table(o, bc.line_a, bc.line_b,
                        {{"p_reformulated", cmp.reformulated.metric.samples}, {"p_original", cmp.original.metric.samples}});
  });
  s["index_reformulated"] = cmp.reformulated.metric.index;
  s["index_original"] = cmp.original.metric.index;

  SchemeConfig sc = c.scheme();
  sc.dt = bc.dt;
  const Stepper ref(bc.problem, mesh, sc);
  sc.formulation = Formulation::Original;
  const Stepper orig(bc.problem, mesh, sc);
  if (c.write_vtk) {
    write_vtk(path_in(c, "reformulated.vtk"), mesh, snapshot_fields(ref, cmp.reformulated.final_state));
    write_vtk(path_in(c, "original.vtk"), mesh, snapshot_fields(orig, cmp.original.final_state));
  }
  if (c.experiment == Experiment::BenchFooting) {
    const double settle = footing_center_settlement(ref, cmp.reformulated.final_state);
    s["settlement"] = settle;
    return finish(c, s, check_footing(cmp, settle));
  }
  return finish(c, s, check_locking(cmp));
}

int single_run(const RunConfig& c) {
  const ProblemCase pc = make_case(c);
  const Mesh mesh = mesh_for(pc, c.h_list.front());
  const Stepper st(pc, mesh, c.scheme());
  warn_theta0(c, st.material(), mesh.cell_size());
  auto snapshot = [&](const State& s) {
    if (!c.write_vtk) return;
    char name[64];
    std::snprintf(name, sizeof name, "state_%05d.vtk", s.step);
    write_vtk(path_in(c, name), mesh, snapshot_fields(st, s));
  };
  State s0 = st.initial_state();
  if (c.snapshot_every > 0) snapshot(s0);
  const State fin = st.run(s0, [&](const State& s) {
    if (c.snapshot_every > 0 && s.step % c.snapshot_every == 0 && s.step != st.num_steps()) snapshot(s);
  });
  snapshot(fin);
  json s;
  s["steps"] = st.num_steps();
  s["t"] = fin.t;
  if (pc.exact) {
    const ErrorNorms e = error_norms(st, fin, *pc.exact, fin.t);
    s["errors"] = {{"tau_l2", e.tau_l2}, {"tau_h1", e.tau_h1}, {"p_l2", e.p_l2}, {"p_h1", e.p_h1}};
  }
  return finish(c, s, {true, std::to_string(st.num_steps()) + " steps to t = " + format_number(fin.t)});
}

int dispatch(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + c.out_dir + "'");
  write_text_file(path_in(c, "config.txt"), emit_config(c));
  switch (c.experiment) {
    case Experiment::ConvergeSpace: return converge_space(c);
    case Experiment::ConvergeTime: return converge_time(c);
    case Experiment::EnergyCheck: return energy_or_mass(c, true);
    case Experiment::MassCheck: return energy_or_mass(c, false);
    case Experiment::InfSup: return infsup(c);
    case Experiment::BenchLocking:
    case Experiment::BenchFooting: return benchmark(c);
    case Experiment::SingleRun: return single_run(c);
  }
  return kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element solver for consolidation with secondary compression"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1, 1);
  Options opts;
  const char* names[] = {"converge-space", "converge-time", "energy-check", "mass-check",
                         "infsup",         "bench-locking", "bench-footing", "single-run"};
  for (const char* name : names) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->set_help_flag("--help", "print help and exit");
    sub->add_option("--config", opts.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--theta", opts.theta, "0 decoupled, 1 coupled");
    sub->add_option("--h", opts.h, "mesh size or comma separated list, fractions allowed");
    sub->add_option("--dt", opts.dt, "time step, fractions allowed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kRuntimeError;
  }
  try {
    const std::string experiment = app.get_subcommands().front()->get_name();
    return dispatch(load(experiment, opts));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
